# core/ensemble.py

"""Wigner ensembles: entry laws, closed-form cumulants and matrix sampling."""
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError
from utils.rng import RngStream

SQRT3 = math.sqrt(3.0)
PHASES = np.array([1.0, 1.0j, -1.0, -1.0j])


class Family(str, Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"
    TWO_POINT = "two_point"
    UNIFORM = "uniform"
    PHASE_FOUR = "phase_four"


@dataclass(frozen=True)
class EntryDistribution:
    """Centered entry law with standard deviation `scale`.

    Real families are standardized to unit variance before scaling. With
    `complex_valued` set, a real family is complexified as (X + iY)/sqrt(2)
    with X, Y independent copies, which keeps E|h|^2 = scale^2 and E h^2 = 0.
    """
    family: Family = Family.GAUSSIAN
    scale: float = 1.0
    p: float = 0.5
    a_over_sigma: float = 1.0
    complex_valued: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.scale < 0 or not math.isfinite(self.scale):
            raise ConfigError(f"scale must be finite and nonnegative, got {self.scale}")
        if self.family == Family.TWO_POINT:
            if not 0.0 < self.p < 1.0:
                raise ConfigError(f"two_point needs 0 < p < 1, got p={self.p}")
            if self.a_over_sigma == 0:
                raise ConfigError("two_point needs a nonzero a_over_sigma")
        if self.family == Family.PHASE_FOUR and not self.complex_valued:
            object.__setattr__(self, "complex_valued", True)

    # -- shape of the standardized real law -------------------------------

    def _two_point_values(self) -> Tuple[float, float]:
        """Atoms of the standardized two-point law.

        Standardizing fixes the atoms at sign(a) * sqrt((1-p)/p) and
        -sign(a) * sqrt(p/(1-p)), so only the sign of `a_over_sigma` matters.
        """
        a = self.a_over_sigma
        b = -self.p * a / (1.0 - self.p)
        var = self.p * a * a / (1.0 - self.p)
        return a / math.sqrt(var), b / math.sqrt(var)

    def standard_moments(self) -> Tuple[float, float]:
        """(m3, m4) of the unit-variance real law."""
        if self.family == Family.GAUSSIAN:
            return 0.0, 3.0
        if self.family == Family.RADEMACHER:
            return 0.0, 1.0
        if self.family == Family.UNIFORM:
            return 0.0, 9.0 / 5.0
        if self.family == Family.TWO_POINT:
            a, b = self._two_point_values()
            p = self.p
            return p * a ** 3 + (1 - p) * b ** 3, p * a ** 4 + (1 - p) * b ** 4
        raise ConfigError(f"{self.family.value} has no real-valued form")

    # -- derived laws -----------------------------------------------------

    def scaled(self, std: float) -> "EntryDistribution":
        return replace(self, scale=float(std))

    def as_complex(self) -> "EntryDistribution":
        return replace(self, complex_valued=True)

    # -- closed forms -----------------------------------------------------

    def standard_abs4(self) -> float:
        """E|h|^4 of the unit-variance complexified law."""
        if self.family == Family.PHASE_FOUR:
            return 1.0
        _, m4 = self.standard_moments()
        return (m4 + 1.0) / 2.0

    def real_cumulants(self) -> Dict[str, float]:
        # Gaussian C3 and C4 come out as exact zeros
        s = self.scale
        m3, m4 = self.standard_moments()
        return {"C2": s ** 2, "C3": s ** 3 * m3, "C4": s ** 4 * (m4 - 3.0)}

    def complex_cumulants(self) -> Dict[str, float]:
        # E h^2 = 0 for every complexified law, so C22 = E|h|^4 - 2 (E|h|^2)^2
        s = self.scale
        return {"C11": s ** 2, "C22": s ** 4 * (self.standard_abs4() - 2.0)}

    # -- sampling ---------------------------------------------------------

    def _standard_real(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.family == Family.GAUSSIAN:
            return rng.standard_normal(size)
        if self.family == Family.RADEMACHER:
            return np.where(rng.random(size) < 0.5, 1.0, -1.0)
        if self.family == Family.UNIFORM:
            return rng.uniform(-SQRT3, SQRT3, size)
        if self.family == Family.TWO_POINT:
            a, b = self._two_point_values()
            return np.where(rng.random(size) < self.p, a, b)
        raise ConfigError(f"{self.family.value} has no real-valued form")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` independent entries from this law."""
        if self.family == Family.PHASE_FOUR:
            return self.scale * PHASES[rng.integers(0, 4, size)]
        if self.complex_valued:
            x = self._standard_real(rng, size)
            y = self._standard_real(rng, size)
            return self.scale * (x + 1j * y) / math.sqrt(2.0)
        return self.scale * self._standard_real(rng, size)


def entry_cumulants(dist: EntryDistribution, beta: int = 1) -> Dict[str, float]:
    """Closed-form cumulants: {C2, C3, C4} for real laws, {C11, C22} for complex ones."""
    if beta == 2 or dist.complex_valued:
        return dist.complex_cumulants()
    return dist.real_cumulants()


@dataclass(frozen=True)
class EnsembleSpec:
    beta: int
    N: int
    offdiag: EntryDistribution = field(default_factory=EntryDistribution)
    diag: EntryDistribution = field(default_factory=EntryDistribution)
    zeta: Optional[Tuple[float, ...]] = None
    zeta_max: float = 10.0

    def __post_init__(self):
        if self.beta not in (1, 2):
            raise ConfigError(f"beta must be 1 or 2, got {self.beta}")
        if self.N < 2:
            raise ConfigError(f"N must be at least 2, got {self.N}")
        if self.diag.complex_valued:
            raise ConfigError(f"beta={self.beta} needs a real-valued diagonal law")
        if self.beta == 1 and self.offdiag.complex_valued:
            raise ConfigError(f"beta=1 needs a real off-diagonal law, got {self.offdiag.family.value}")
        if self.zeta is not None:
            zeta = tuple(float(z) for z in self.zeta)
            if len(zeta) != self.N:
                raise ConfigError(f"zeta profile has length {len(zeta)}, expected N={self.N}")
            if min(zeta) < 0:
                raise ConfigError("zeta profile must be nonnegative")
            if max(zeta) > self.zeta_max:
                raise ConfigError(f"zeta profile exceeds the bound {self.zeta_max}")
            object.__setattr__(self, "zeta", zeta)

    @property
    def canonical_zeta(self) -> float:
        return 2.0 / self.beta

    @property
    def is_canonical(self) -> bool:
        return self.zeta is None or all(z == self.canonical_zeta for z in self.zeta)

    def zeta_profile(self) -> np.ndarray:
        if self.zeta is None:
            return np.full(self.N, self.canonical_zeta)
        return np.asarray(self.zeta, dtype=float)

    def offdiag_law(self) -> EntryDistribution:
        law = self.offdiag.scaled(1.0 / math.sqrt(self.N))
        return law.as_complex() if self.beta == 2 else law

    def diag_unit_law(self) -> EntryDistribution:
        return self.diag.scaled(1.0)

    def with_zeta(self, zeta: Optional[Sequence[float]]) -> "EnsembleSpec":
        return replace(self, zeta=None if zeta is None else tuple(zeta))


@dataclass(frozen=True)
class CumulantSums:
    sum_c4: float
    sum_c3_diag: float
    sum_c22: float
    scaled_c4_offdiag: float
    beta: int = 1
    N: int = 0

    @property
    def quartic(self) -> float:
        """The fourth-order sum entering the beta-specific formulas."""
        return self.sum_c4 if self.beta == 1 else self.sum_c22

    @classmethod
    def gaussian(cls, beta: int = 1, N: int = 0) -> "CumulantSums":
        return cls(0.0, 0.0, 0.0, 0.0, beta, N)

    def to_dict(self) -> Dict[str, float]:
        return {
            "sum_C4": self.sum_c4,
            "sum_C3_diag": self.sum_c3_diag,
            "sum_C22": self.sum_c22,
            "scaled_C4_offdiag": self.scaled_c4_offdiag,
        }


def cumulant_sums(spec: EnsembleSpec) -> CumulantSums:
    """Cumulant sums over all ordered pairs (i, j), diagonal included."""
    N = spec.N
    zeta_over_n = spec.zeta_profile() / N
    m3, m4 = spec.diag_unit_law().standard_moments()
    diag_c3 = float(np.sum(zeta_over_n ** 1.5)) * m3
    diag_c4 = float(np.sum(zeta_over_n ** 2)) * (m4 - 3.0)

    off = spec.offdiag_law()
    if spec.beta == 1:
        c4 = off.real_cumulants()["C4"]
        return CumulantSums(
            sum_c4=N * (N - 1) * c4 + diag_c4,
            sum_c3_diag=diag_c3,
            sum_c22=0.0,
            scaled_c4_offdiag=N * N * c4,
            beta=1,
            N=N,
        )
    c22 = off.complex_cumulants()["C22"]
    return CumulantSums(
        sum_c4=0.0,
        sum_c3_diag=diag_c3,
        sum_c22=N * (N - 1) * c22 + diag_c4,
        scaled_c4_offdiag=N * N * c22,
        beta=2,
        N=N,
    )


def sample_wigner(spec: EnsembleSpec, stream: RngStream) -> np.ndarray:
    """Hermitian N x N matrix; a pure function of (spec, stream)."""
    rng = stream.generator()
    N = spec.N
    upper = np.triu_indices(N, k=1)
    dtype = complex if spec.beta == 2 else float

    H = np.zeros((N, N), dtype=dtype)
    H[upper] = spec.offdiag_law().sample(rng, upper[0].size)
    H = H + H.conj().T
    diag = spec.diag_unit_law().sample(rng, N) * np.sqrt(spec.zeta_profile() / N)
    H[np.diag_indices(N)] = diag
    return H
