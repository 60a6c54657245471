#experiments/linstat_observables.py
"""Linear eigenvalue statistics on mesoscopic and macroscopic scales."""
import math
from functools import cached_property
from typing import Tuple

from core.analysis import TestFunction, bump, polynomial, predicted_linstat_breakdown
from core.errors import ConfigError
from core.quadrature import quad1d
from core.spectral import EigenSample, linear_statistic, semicircle
from core.theory import TermBreakdown, lp_macroscopic_variance
from .base_observable import BaseObservable, register, scalar_breakdown


def semicircle_mean(f, tol: float = 1e-10) -> float:
    """Integral of f against the semicircle density."""
    return quad1d(lambda t: float(f(2.0 * math.cos(t))) * 2.0 / math.pi * math.sin(t) ** 2, (0.0, math.pi), tol=tol)


@register
class LinstatCov(BaseObservable):
    """N^-2 Cov(tr f^eta(H), tr g^eta(H)) for bumps centred at E +- omega/rho_E."""

    name = "linstat_cov"

    @cached_property
    def f(self) -> TestFunction:
        return bump(self.cfg.window.M)

    def validate(self) -> None:
        w = self.cfg.window
        if w.M * w.eta > w.omega:
            raise ConfigError(f"linstat_cov needs M*eta <= omega, got M*eta={w.M * w.eta}, omega={w.omega}")

    def reference(self) -> complex:
        w = self.cfg.window
        return semicircle(min(max(w.E + w.omega / w.rho, -2.0), 2.0))["rho"] / w.rho

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        w, N = self.cfg.window, sample.N
        return (linear_statistic(sample, w, self.f, 1) / N,
                linear_statistic(sample, w, self.f, -1) / N)

    def prediction(self) -> TermBreakdown:
        spec = self.cfg.spec
        return predicted_linstat_breakdown(self.cfg.window, self.f, self.f, self.sums, spec.beta, spec.N,
                                           self.zeta_profile, tol=self.cfg.quad_tol)


@register
class LinstatVar(BaseObservable):
    """Var sum_i p(lambda_i) for the polynomial profile cfg.profile."""

    name = "linstat_var"

    @cached_property
    def p(self) -> TestFunction:
        return polynomial(self.cfg.profile)

    def reference(self) -> complex:
        return self.cfg.spec.N * semicircle_mean(self.p)

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        x = float(self.p(sample.eigenvalues).sum())
        return x, x

    def prediction(self) -> TermBreakdown:
        spec = self.cfg.spec
        value = lp_macroscopic_variance(self.p, self.sums, spec.beta)
        return scalar_breakdown(f"linstat_var(beta={spec.beta})", {"macroscopic_variance": value},
                                abs(value) / spec.N)
