#experiments/green_observables.py
"""Observables built from the empirical Stieltjes transform."""
from typing import Tuple

from core.spectral import EigenSample, empirical_stieltjes_power, msc_stieltjes
from core.theory import (
    TermBreakdown,
    conjugate_terms,
    cov_green_conjugate,
    cov_green_nonconjugate,
    expected_stieltjes,
    expected_stieltjes_sq,
    green_error_bound,
)
from .base_observable import BaseObservable, register, scalar_breakdown


@register
class GreenCovConjugate(BaseObservable):
    """Cov(G(z1), G(z2*)), with G(z2*) = conj G(z2) from the same spectrum."""

    name = "green_cov_conjugate"

    def reference(self) -> complex:
        return msc_stieltjes(self.cfg.window.z1)

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        w = self.cfg.window
        return (empirical_stieltjes_power(sample, w.z1),
                empirical_stieltjes_power(sample, w.z2).conjugate())

    def prediction(self) -> TermBreakdown:
        spec = self.cfg.spec
        return cov_green_conjugate(self.cfg.window, self.sums, spec.beta, spec.N, self.zeta_profile)


@register
class GreenCovNonconjugate(BaseObservable):
    name = "green_cov_nonconjugate"

    def reference(self) -> complex:
        return msc_stieltjes(self.cfg.window.z1)

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        w = self.cfg.window
        return empirical_stieltjes_power(sample, w.z1), empirical_stieltjes_power(sample, w.z2)

    def prediction(self) -> TermBreakdown:
        spec = self.cfg.spec
        return cov_green_nonconjugate(self.cfg.window, self.sums, spec.beta, spec.N)


@register
class GreenVariance(BaseObservable):
    """Var G(z1) = Cov(G(z1), G(z1*)); of order (N eta)^-2."""

    name = "green_variance"

    def reference(self) -> complex:
        return msc_stieltjes(self.cfg.window.z1)

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        g = empirical_stieltjes_power(sample, self.cfg.window.z1)
        return g, g.conjugate()

    def prediction(self) -> TermBreakdown:
        spec, z1 = self.cfg.spec, self.cfg.window.z1
        out = conjugate_terms(z1, z1.conjugate(), z1.real, spec.N, self.sums, spec.beta)
        out.kind = f"green_variance(beta={spec.beta})"
        out.error_bound = green_error_bound(spec.N, 2.0 * z1.imag)
        return out


@register
class MeanStieltjes(BaseObservable):
    name = "mean_stieltjes"
    mode = "mean"

    def reference(self) -> complex:
        return msc_stieltjes(self.cfg.z)

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        return empirical_stieltjes_power(sample, self.cfg.z), 0j

    def prediction(self) -> TermBreakdown:
        spec, z = self.cfg.spec, self.cfg.z
        m = msc_stieltjes(z)
        full = expected_stieltjes(spec, z, self.sums)
        return scalar_breakdown(
            f"mean_stieltjes(beta={spec.beta})",
            {"m": m, "one_over_N_correction": full - m},
            1.0 / spec.N ** 2,
        )


@register
class MeanStieltjesSq(BaseObservable):
    """E (1/N) tr G(z)^2 against its leading value."""

    name = "mean_stieltjes_sq"
    mode = "mean"

    def reference(self) -> complex:
        return expected_stieltjes_sq(self.cfg.z)

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        return empirical_stieltjes_power(sample, self.cfg.z, 2), 0j

    def prediction(self) -> TermBreakdown:
        spec = self.cfg.spec
        return scalar_breakdown(
            f"mean_stieltjes_sq(beta={spec.beta})",
            {"leading": expected_stieltjes_sq(self.cfg.z)},
            1.0 / spec.N,
        )
