# core/spectral.py

"""Spectra of sampled matrices and semicircle-law reference quantities."""
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import integrate, linalg, optimize, special

from core.errors import DomainError, EigenSolverError


@dataclass(frozen=True)
class EigenSample:
    eigenvalues: np.ndarray
    sample_index: int = -1

    @property
    def N(self) -> int:
        return int(self.eigenvalues.size)


@dataclass(frozen=True)
class SpectralWindow:
    """Reference energy E, separation omega, resolution eta, support radius M.

    Green-function experiments place the spectral parameters at
    z1 = E - omega/2 + i eta and z2 = E + omega/2 + i eta, so E1 - E2 = -omega.
    Linear statistics centre f at E + omega/rho_E and g at E - omega/rho_E.
    """
    E: float
    omega: float
    eta: float
    M: float = 1.0

    def __post_init__(self):
        if not -2.0 < self.E < 2.0:
            raise DomainError(f"E must lie in (-2, 2), got {self.E}")
        if self.omega <= 0 or self.eta <= 0:
            raise DomainError(f"omega and eta must be positive, got omega={self.omega}, eta={self.eta}")
        if self.M < 1.0:
            raise DomainError(f"M must be at least 1, got {self.M}")

    @property
    def E1(self) -> float:
        return self.E - self.omega / 2.0

    @property
    def E2(self) -> float:
        return self.E + self.omega / 2.0

    @property
    def z1(self) -> complex:
        return complex(self.E1, self.eta)

    @property
    def z2(self) -> complex:
        return complex(self.E2, self.eta)

    @property
    def kappa(self) -> float:
        return semicircle(self.E)["kappa"]

    @property
    def rho(self) -> float:
        return semicircle(self.E)["rho"]

    def alpha(self, N: int) -> float:
        return -math.log(self.eta) / math.log(N)

    def beta_exp(self, N: int) -> float:
        return -math.log(self.omega) / math.log(N)

    def hypothesis_violations(self, N: int, tau: float) -> list:
        """Asymptotic hypotheses behind the linear-statistics limit that this window misses."""
        issues = []
        if self.eta < N ** (-1.0 + tau):
            issues.append(f"eta={self.eta} below N^(-1+tau)={N ** (-1.0 + tau):.3g}")
        if self.M * self.eta > self.omega:
            issues.append(f"M*eta={self.M * self.eta} exceeds omega={self.omega}")
        if self.omega > tau / 3.0:
            issues.append(f"omega={self.omega} exceeds tau/3={tau / 3.0:.3g}")
        return issues

    def to_dict(self) -> Dict[str, float]:
        return {"E": self.E, "omega": self.omega, "eta": self.eta, "M": self.M}


def eigen_decompose(H: np.ndarray, sample_index: Optional[int] = None) -> EigenSample:
    """Full spectrum of a Hermitian matrix, ascending."""
    try:
        w = linalg.eigvalsh(H, check_finite=False, driver="evd")
    except (linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(sample_index, str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise EigenSolverError(sample_index, "non-finite eigenvalue")
    return EigenSample(np.sort(w), -1 if sample_index is None else sample_index)


def empirical_stieltjes_power(eigs: EigenSample, z: complex, m: int = 1) -> complex:
    """(1/N) sum_i (lambda_i - z)^(-m)."""
    if z.imag == 0:
        raise DomainError("empirical Stieltjes transform needs Im z != 0")
    if m < 1:
        raise DomainError(f"power must be positive, got {m}")
    return complex(np.mean((eigs.eigenvalues - z) ** (-m)))


def linear_statistic(eigs: EigenSample, window: SpectralWindow, f: Callable, sign: int = 1) -> float:
    """sum_i (1/eta) f(((lambda_i - E) rho_E - sign*omega)/eta)."""
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    args = ((eigs.eigenvalues - window.E) * window.rho - sign * window.omega) / window.eta
    return float(np.sum(f(args)) / window.eta)


def sqrt_zsq_minus4(z):
    """s(z) = z sqrt(1 - 4/z^2) with the principal root; boundary value i*kappa from above."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = z * np.sqrt(1.0 - 4.0 / (z * z))
    return s if s.ndim else complex(s)


def msc_stieltjes(z):
    """Stieltjes transform of the semicircle law."""
    s = sqrt_zsq_minus4(z)
    if np.ndim(z):
        return (-np.asarray(z, dtype=complex) + s) / 2.0
    return (-complex(z) + s) / 2.0


def semicircle(E: float) -> Dict[str, float]:
    kappa = math.sqrt(max(4.0 - E * E, 0.0))
    return {"rho": kappa / (2.0 * math.pi), "kappa": kappa}


def semicircle_cdf(gamma: float) -> float:
    g = min(max(gamma, -2.0), 2.0)
    return 0.5 + (g * math.sqrt(4.0 - g * g) + 4.0 * math.asin(g / 2.0)) / (4.0 * math.pi)


def quantile(k: int, N: int) -> float:
    """Classical location gamma_k: k/N of the semicircle mass lies below it."""
    if not 1 <= k <= N:
        raise DomainError(f"quantile index must satisfy 1 <= k <= N, got k={k}, N={N}")
    if k == N:
        return 2.0
    if 2 * k == N:
        return 0.0
    target = k / N
    return optimize.brentq(lambda g: semicircle_cdf(g) - target, -2.0, 2.0, xtol=1e-13)


def _sinc_derivative(u: float) -> float:
    if abs(u) < 1e-4:
        return -math.pi ** 2 * u / 3.0
    x = math.pi * u
    return (x * math.cos(x) - math.sin(x)) / (math.pi * u * u)


def sine_kernel(u: float) -> Dict[str, float]:
    """s, Y1, Y2 and the averaged large-u expansion of Y1 at u."""
    s = float(np.sinc(u))
    si, _ = special.sici(math.pi * u)
    tail = (math.pi / 2.0 - si) / math.pi
    y2 = -s * s
    y1 = -_sinc_derivative(u) * tail - s * s
    avg = -1.0 / (math.pi ** 2 * u ** 2) + 3.0 / (2.0 * math.pi ** 4 * u ** 4) if u != 0 else float("-inf")
    return {"u": u, "s": s, "Y1": y1, "Y2": y2, "Y1_avg_asym": avg}


def window_average(fn: Callable[[float], float], center: float, half_width: float, n_points: int = 10001) -> float:
    """Simpson average of fn over [center - half_width, center + half_width]."""
    if n_points % 2 == 0:
        n_points += 1
    x = np.linspace(center - half_width, center + half_width, n_points)
    y = np.array([fn(t) for t in x])
    return float(integrate.simpson(y, x=x) / (2.0 * half_width))


def local_law_bound(N: int, eta: float, constant: float = 5.0) -> float:
    return constant / (N * eta)


def bulk_indices_ok(i: int, j: int, N: int, tau: float) -> Tuple[bool, float, float]:
    """Both quantiles in [-2+tau, 2-tau] and both labels in [tau N, (1-tau) N]."""
    gi, gj = quantile(i, N), quantile(j, N)
    in_energy = -2.0 + tau <= gi <= 2.0 - tau and -2.0 + tau <= gj <= 2.0 - tau
    in_labels = all(tau * N <= k <= (1.0 - tau) * N for k in (i, j))
    ok = in_energy and in_labels
    return ok, gi, gj
