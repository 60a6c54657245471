#experiments/eigenvalue_observables.py
"""Observables on individual ordered eigenvalues."""
import math
from typing import Tuple

from core.errors import ConfigError
from core.spectral import EigenSample, bulk_indices_ok
from core.theory import TermBreakdown, gustavsson_prediction
from .base_observable import BaseObservable, register, scalar_breakdown


@register
class Gustavsson(BaseObservable):
    """corr(lambda_i, lambda_j) for 1-based bulk indices i <= j."""

    name = "gustavsson"
    mode = "corr"

    def __init__(self, cfg, *args):
        super().__init__(cfg, *args)
        if len(args) != 2:
            raise ConfigError(f"gustavsson takes two indices, got {args}")
        self.i, self.j = args

    def validate(self) -> None:
        N = self.cfg.spec.N
        if not 1 <= self.i <= self.j <= N:
            raise ConfigError(f"gustavsson indices need 1 <= i <= j <= N, got i={self.i}, j={self.j}, N={N}")
        ok, gi, gj = bulk_indices_ok(self.i, self.j, N, self.cfg.tau)
        if not ok:
            raise ConfigError(
                f"indices outside the bulk: gamma_{self.i}={gi:.4f}, gamma_{self.j}={gj:.4f}, "
                f"tau={self.cfg.tau}, labels must lie in [{self.cfg.tau * N:g}, {(1 - self.cfg.tau) * N:g}]"
            )

    def reference(self) -> complex:
        return 0j

    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        eigs = sample.eigenvalues
        return float(eigs[self.i - 1]), float(eigs[self.j - 1])

    def prediction(self) -> TermBreakdown:
        N = self.cfg.spec.N
        # the limit is approached at rate 1/log N
        return scalar_breakdown(
            f"gustavsson(N={N})",
            {"limit": gustavsson_prediction(N, self.i, self.j)},
            0.0 if self.i == self.j else 1.0 / math.log(N),
        )
