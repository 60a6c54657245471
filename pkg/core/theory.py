# core/theory.py

"""Closed-form predictions for mesoscopic eigenvalue correlations.

Every covariance formula is returned as a TermBreakdown so the CLI and the
comparison report can show each displayed term next to the estimate.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from core.ensemble import CumulantSums, EnsembleSpec, cumulant_sums
from core.errors import CoincidentSpectralParameter, DomainError
from core.quadrature import quad1d, quad2d
from core.spectral import SpectralWindow, msc_stieltjes, semicircle, sqrt_zsq_minus4


@dataclass
class TermBreakdown:
    """Named terms of a prediction; total() excludes the error bound."""
    kind: str = ""
    terms: Dict[str, complex] = field(default_factory=dict)
    error_bound: float = 0.0

    def add(self, label: str, value) -> None:
        self.terms[label] = complex(value)

    def total(self) -> complex:
        return complex(sum(self.terms.values(), 0j))

    def to_dict(self) -> Dict[str, Any]:
        total = self.total()
        return {
            "kind": self.kind,
            "terms": {k: {"re": v.real, "im": v.imag} for k, v in self.terms.items()},
            "total": {"re": total.real, "im": total.imag},
            "error_bound": self.error_bound,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TermBreakdown":
        terms = {}
        for label, value in data.get("terms", {}).items():
            if isinstance(value, dict):
                terms[label] = complex(value.get("re", 0.0), value.get("im", 0.0))
            else:
                terms[label] = complex(value)
        return cls(kind=data.get("kind", ""), terms=terms, error_bound=float(data.get("error_bound", 0.0)))


@dataclass
class UpsilonValue:
    value: float
    terms: TermBreakdown
    error_bound: float

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "error_bound": self.error_bound, "breakdown": self.terms.to_dict()}


def _check_beta(beta: int) -> None:
    if beta not in (1, 2):
        raise DomainError(f"beta must be 1 or 2, got {beta}")


def m_boundary(E: float) -> complex:
    """m(E + i0) for |E| < 2."""
    if not -2.0 < E < 2.0:
        raise DomainError(f"E must lie in (-2, 2), got {E}")
    return complex(-E, math.sqrt(4.0 - E * E)) / 2.0


# -- f-functions of the Green-function covariances ------------------------

_FAMILIES = ("conjugate", "nonconjugate")


def f_functions(z1: complex, z2: complex, family: str = "all") -> Dict[str, complex]:
    """f1..f7 at raw arguments; pass z2* yourself for the conjugate family.

    ``family`` restricts the output to f1..f4 ("conjugate") or f5..f7
    ("nonconjugate"). Each family has its own pole: s(z1) = s(z2) for the
    first and s(z1) = -s(z2) for the second. At E = 0 the conjugate call has
    z2* = -z1, which sits on the second pole only.
    """
    if family not in ("all", *_FAMILIES):
        raise ValueError(f"unknown f-function family {family!r}")
    s1, s2 = sqrt_zsq_minus4(z1), sqrt_zsq_minus4(z2)
    m1, m2 = msc_stieltjes(z1), msc_stieltjes(z2)
    p = s1 * s2
    q = m1 * m2
    scale = 1e-14 * max(1.0, abs(s1))
    out: Dict[str, complex] = {}
    if family in ("all", "conjugate"):
        if abs(s1 - s2) <= scale:
            raise CoincidentSpectralParameter(z1, z2)
        out.update({
            "f1": -2.0 / s1 + 2.0 / s2,
            "f2": (4.0 + z1 * z2 + p) / (p * (s1 - s2) ** 2),
            "f3": 2.0 * q * q / p,
            "f4": -q * (m1 + m2) / p,
        })
    if family in ("all", "nonconjugate"):
        if abs(s1 + s2) <= scale:
            raise CoincidentSpectralParameter(z1, z2)
        out.update({
            "f5": (4.0 + z1 * z2 - p) / (p * (s1 + s2) ** 2),
            "f6": 2.0 * q * q / p,
            "f7": -q * (m1 + m2) / p,
        })
    return out


def V_of_E(E: float) -> float:
    kappa = semicircle(E)["kappa"]
    m = m_boundary(E)
    return 2.0 * E * (E * E - 2.0) / kappa + 2.0 * (m ** 4).imag / kappa ** 2


def conjugate_terms(z1: complex, z2c: complex, E: float, N: int, sums: CumulantSums, beta: int) -> TermBreakdown:
    """Cov(G(z1), G(z2*)) assembled from the displayed terms at raw z1 and z2* = z2c."""
    _check_beta(beta)
    f = f_functions(z1, z2c, "conjugate")
    d = z1 - z2c
    kappa = semicircle(E)["kappa"]
    quartic = sums.quartic
    out = TermBreakdown(kind=f"green_cov_conjugate(beta={beta})")
    if beta == 1:
        out.add("leading", -2.0 / (N ** 2 * d ** 2))
        out.add("f1_term", f["f1"] / (N ** 3 * d ** 3))
        out.add("quartic_term", 12.0 / (N ** 4 * d ** 4 * kappa ** 2))
        out.add("f2_block", f["f2"] / N ** 2)
        out.add("f3_cumulant_block", f["f3"] * quartic / N ** 2)
        out.add("f4_cumulant_block", f["f4"] * sums.sum_c3_diag / N ** 2)
        out.add("V_block", 1j / (N ** 3 * d ** 2) * (-E / kappa ** 3 + V_of_E(E) * quartic))
    else:
        out.add("leading", -1.0 / (N ** 2 * d ** 2))
        out.add("f2_block", f["f2"] / (2.0 * N ** 2))
        out.add("f3_cumulant_block", f["f3"] * quartic / N ** 2)
        out.add("f4_cumulant_block", f["f4"] * sums.sum_c3_diag / N ** 2)
        out.add("V_block", 1j * V_of_E(E) * quartic / (2.0 * N ** 3 * d ** 2))
    return out


def nonconjugate_terms(z1: complex, z2: complex, N: int, sums: CumulantSums, beta: int) -> TermBreakdown:
    _check_beta(beta)
    f = f_functions(z1, z2, "nonconjugate")
    out = TermBreakdown(kind=f"green_cov_nonconjugate(beta={beta})")
    out.add("f5_block", f["f5"] / (N ** 2 * (1 if beta == 1 else 2)))
    out.add("f6_cumulant_block", f["f6"] * sums.quartic / N ** 2)
    out.add("f7_cumulant_block", f["f7"] * sums.sum_c3_diag / N ** 2)
    return out


def green_error_bound(N: int, omega: float) -> float:
    no = N * omega
    return 1.0 / no ** 5 + 1.0 / (N * no ** 3) + 1.0 / (N ** 1.5 * no ** 2) + 1.0 / (N ** 2 * no)


def cov_green_conjugate(window: SpectralWindow, sums: CumulantSums, beta: int, N: int,
                        zeta_profile: Optional[Sequence[float]] = None) -> TermBreakdown:
    out = conjugate_terms(window.z1, window.z2.conjugate(), window.E, N, sums, beta)
    if zeta_profile is not None:
        correction = cov_green_zeta_correction(window, zeta_profile, beta)
        if correction != 0:
            out.add("zeta_correction", correction)
    out.error_bound = green_error_bound(N, window.omega)
    return out


def cov_green_nonconjugate(window: SpectralWindow, sums: CumulantSums, beta: int, N: int) -> TermBreakdown:
    out = nonconjugate_terms(window.z1, window.z2, N, sums, beta)
    b = window.beta_exp(N)
    out.error_bound = N ** (2 * b - 3.5) + N ** (b - 3.0)
    return out


def cov_green_zeta_correction(window: SpectralWindow, zeta_profile: Sequence[float], beta: int) -> complex:
    """Change of Cov(G(z1), G(z2*)) when the diagonal variances deviate from 2/beta."""
    _check_beta(beta)
    zeta = np.asarray(zeta_profile, dtype=float)
    N = zeta.size
    excess = float(np.sum(zeta - 2.0 / beta))
    if excess == 0.0:
        return 0j
    z1, z2c = window.z1, window.z2.conjugate()
    d = z1 - z2c
    m_sq = (m_boundary(window.E) ** 2).imag
    head = (-2.0 + 2.0j * m_sq) if beta == 1 else (-1.0 + 1.0j * m_sq)
    bracket = head / (N ** 4 * d ** 2) + msc_stieltjes(z1) * msc_stieltjes(z2c) / (
        N ** 3 * sqrt_zsq_minus4(z1) * sqrt_zsq_minus4(z2c))
    return complex(bracket * excess)


# -- means ----------------------------------------------------------------

def expected_stieltjes(spec: EnsembleSpec, z: complex, sums: Optional[CumulantSums] = None) -> complex:
    """E G(z) to order 1/N."""
    if z.imag <= 0:
        raise DomainError(f"expected_stieltjes needs Im z > 0, got {z}")
    sums = sums or cumulant_sums(spec)
    m, s = msc_stieltjes(z), sqrt_zsq_minus4(z)
    if spec.beta == 1:
        bracket = -0.5 + z / (2.0 * s) + m ** 4 * sums.sum_c4
    else:
        bracket = m ** 4 * sums.sum_c22
    return complex(m - bracket / (spec.N * s))


def expected_stieltjes_sq(z: complex) -> complex:
    """Leading value of E (1/N) tr G(z)^2."""
    if z.imag == 0:
        raise DomainError("expected_stieltjes_sq needs Im z != 0")
    return complex(-0.5 + z / (2.0 * sqrt_zsq_minus4(z)))


# -- real-axis kernels ----------------------------------------------------

def _kappa_of(x, name: str):
    x = np.asarray(x, dtype=float)
    bad = np.abs(x) >= 2.0
    if np.any(bad):
        raise DomainError(f"{name} must lie in (-2, 2), got {x[bad].ravel()[0]}")
    return np.sqrt(4.0 - x * x)


def g_functions(x1, x2) -> Dict[str, Any]:
    k1, k2 = _kappa_of(x1, "x1"), _kappa_of(x2, "x2")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    kk = k1 * k2
    out = {
        "g1": -4.0 * (4.0 + x1 * x2 + kk) / (kk * (k1 + k2) ** 2),
        "g2": 2.0 * (x1 * x1 - 2.0) * (x2 * x2 - 2.0) / kk,
        "g3": (x1 * x1 * x2 + x1 * x2 * x2 - 2.0 * x1 - 2.0 * x2) / kk,
        "g4": x1 * x2 / kk,
    }
    if np.ndim(x1) == 0 and np.ndim(x2) == 0:
        return {k: float(v) for k, v in out.items()}
    return out


def F_functions(window: SpectralWindow, u, v, N: int) -> Dict[str, Any]:
    """g1..g4 pulled back to the unfolded variables x = E + u/(N rho_E)."""
    scale = N * window.rho
    g = g_functions(window.E + np.asarray(u) / scale, window.E + np.asarray(v) / scale)
    return {"F" + k[1:]: val for k, val in g.items()}


def error_bound_upsilon(N: int, u: float, v: float) -> float:
    d = abs(u - v)
    if d == 0:
        return math.inf
    return 1.0 / d ** 5 + 1.0 / (N * d ** 3) + 1.0 / (N ** 1.5 * d ** 2) + 1.0 / (N ** 2 * d)


def upsilon_terms(window: SpectralWindow, u, v, sums: CumulantSums, beta: int, N: int,
                  zeta_excess: float = 0.0) -> Dict[str, Any]:
    """Terms of the unfolded two-point kernel; broadcasts over u and v."""
    _check_beta(beta)
    d = np.asarray(u, dtype=float) - np.asarray(v, dtype=float)
    if np.any(d == 0):
        raise DomainError("upsilon is singular at u == v")
    kappa2 = window.kappa ** 2
    F = F_functions(window, u, v, N)
    pi2 = math.pi ** 2
    terms = {}
    if beta == 1:
        terms["leading"] = -1.0 / (pi2 * d ** 2)
        terms["quartic_term"] = 3.0 / (2.0 * pi2 ** 2 * d ** 4)
        terms["F1_block"] = F["F1"] / (N ** 2 * kappa2)
    else:
        terms["leading"] = -1.0 / (2.0 * pi2 * d ** 2)
        terms["F1_block"] = F["F1"] / (2.0 * N ** 2 * kappa2)
    terms["F2_cumulant_block"] = F["F2"] * sums.quartic / (N ** 2 * kappa2)
    terms["F3_cumulant_block"] = F["F3"] * sums.sum_c3_diag / (N ** 2 * kappa2)
    if zeta_excess:
        c_beta = 1.0 if beta == 1 else 0.5
        terms["zeta_correction"] = (F["F4"] / (N ** 3 * kappa2) - c_beta / (N ** 2 * pi2 * d ** 2)) * zeta_excess
    return terms


def zeta_excess(zeta_profile: Optional[Sequence[float]], beta: int) -> float:
    if zeta_profile is None:
        return 0.0
    return float(np.sum(np.asarray(zeta_profile, dtype=float) - 2.0 / beta))


def upsilon(window: SpectralWindow, u: float, v: float, sums: CumulantSums, beta: int, N: int,
            zeta_profile: Optional[Sequence[float]] = None) -> UpsilonValue:
    terms = upsilon_terms(window, u, v, sums, beta, N, zeta_excess(zeta_profile, beta))
    bound = error_bound_upsilon(N, u, v)
    breakdown = TermBreakdown(kind=f"upsilon(beta={beta})", error_bound=bound)
    for label, value in terms.items():
        breakdown.add(label, float(value))
    return UpsilonValue(value=breakdown.total().real, terms=breakdown, error_bound=bound)


# -- macroscopic variance -------------------------------------------------

def lp_macroscopic_variance(f, sums: CumulantSums, beta: int = 1, tol: float = 1e-8) -> float:
    """Var sum_i f(lambda_i) for a smooth macroscopic profile f.

    Both integrals run in the angle variable x = 2 cos(theta), which removes
    the inverse square-root endpoint singularities.
    """
    _check_beta(beta)

    def first(theta: float, phi: float) -> float:
        x, y = 2.0 * math.cos(theta), 2.0 * math.cos(phi)
        if abs(x - y) < 1e-7:
            q = float(f.derivative(0.5 * (x + y), 1))
        else:
            q = (float(f(x)) - float(f(y))) / (x - y)
        return q * q * (4.0 - x * y)

    def second(theta: float) -> float:
        return float(f(2.0 * math.cos(theta))) * (2.0 - 4.0 * math.cos(theta) ** 2)

    points = getattr(f, "angle_breakpoints", lambda: ())()
    first_integral = quad2d(first, ((0.0, math.pi), (0.0, math.pi)), tol=tol, points=(points, points))
    second_integral = quad1d(second, (0.0, math.pi), tol=tol, points=points)
    return (first_integral / (beta * 2.0 * math.pi ** 2)
            + sums.scaled_c4_offdiag / (2.0 * math.pi ** 2) * second_integral ** 2)


def lp_polarized_covariance(f, g, sums: CumulantSums, beta: int = 1, tol: float = 1e-8) -> float:
    """Cov(sum f(lambda_i), sum g(lambda_i)) as (V(f+g) - V(f-g))/4."""
    plus = f.combine(g, 1.0)
    minus = f.combine(g, -1.0)
    return 0.25 * (lp_macroscopic_variance(plus, sums, beta, tol) - lp_macroscopic_variance(minus, sums, beta, tol))


def gustavsson_prediction(N: int, i: int, j: int) -> float:
    """Limiting correlation of bulk eigenvalues lambda_i and lambda_j."""
    if i == j:
        return 1.0
    return 1.0 - math.log(abs(j - i)) / math.log(N)
