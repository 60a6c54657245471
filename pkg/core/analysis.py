# core/analysis.py

"""Test functions, the almost-analytic extension and the predicted linear-statistics covariance."""
import math
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import make_interp_spline

from core.ensemble import CumulantSums
from core.errors import DomainError
from core.quadrature import quad1d, quad2d
from core.spectral import SpectralWindow
from core.theory import (
    TermBreakdown,
    conjugate_terms,
    error_bound_upsilon,
    nonconjugate_terms,
    upsilon_terms,
    zeta_excess,
)

MAX_EXTENSION_ORDER = 12
EXCISION_RADIUS = 1e-6


class TestFunction:
    """A smooth profile with derivatives, supported in `support`."""
    __test__ = False

    def __init__(self, kind: str, M: float, value: Callable, derivative: Callable,
                 support: Optional[Tuple[float, float]] = None, breakpoints: Sequence[float] = ()):
        self.kind = kind
        self.M = float(M)
        self._value = value
        self._derivative = derivative
        self.support = support if support is not None else (-self.M, self.M)
        self.breakpoints = tuple(breakpoints)

    def __call__(self, x):
        return self._value(x)

    def derivative(self, x, n: int = 1):
        if n == 0:
            return self._value(x)
        return self._derivative(x, n)

    def combine(self, other: "TestFunction", sign: float = 1.0) -> "TestFunction":
        lo = min(self.support[0], other.support[0])
        hi = max(self.support[1], other.support[1])
        return TestFunction(
            "custom",
            max(self.M, other.M),
            lambda x: self(x) + sign * other(x),
            lambda x, n: self.derivative(x, n) + sign * other.derivative(x, n),
            support=(lo, hi),
            breakpoints=self.breakpoints + other.breakpoints + self.support + other.support,
        )

    def angle_breakpoints(self) -> List[float]:
        """Support edges in the variable x = 2 cos(theta)."""
        edges = set(self.breakpoints) | set(self.support)
        return sorted(math.acos(x / 2.0) for x in edges if -2.0 < x < 2.0)


# -- bump -----------------------------------------------------------------

@lru_cache(maxsize=None)
def _bump_polynomials(n_max: int) -> Tuple[Polynomial, ...]:
    """P_n with d^n/dt^n exp(-1/(1-t^2)) = P_n(t) (1-t^2)^(-2n) exp(-1/(1-t^2))."""
    t = Polynomial([0.0, 1.0])
    w = Polynomial([1.0, 0.0, -1.0])
    polys = [Polynomial([1.0])]
    for n in range(n_max):
        p = polys[-1]
        polys.append(w * w * p.deriv() + (4.0 * n * t * w - 2.0 * t) * p)
    return tuple(polys)


@lru_cache(maxsize=None)
def _bump_mass() -> float:
    return quad1d(lambda t: math.exp(-1.0 / (1.0 - t * t)) if abs(t) < 1.0 else 0.0, (-1.0, 1.0), tol=1e-14)


def _bump_eval(x, n: int, M: float, c: float):
    t = np.asarray(x, dtype=float)
    flat = np.atleast_1d(t / M)
    out = np.zeros_like(flat)
    inside = np.abs(flat) < 1.0
    if np.any(inside):
        ti = flat[inside]
        w = 1.0 - ti * ti
        poly = _bump_polynomials(n)[n]
        out[inside] = c * M ** (-n) * poly(ti) * np.exp(-1.0 / w - 2.0 * n * np.log(w))
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def bump(M: float = 1.0) -> TestFunction:
    """c exp(-1/(1-(x/M)^2)) on |x| < M, normalized to unit mass."""
    if M <= 0:
        raise DomainError(f"bump radius must be positive, got {M}")
    c = 1.0 / (M * _bump_mass())
    return TestFunction(
        "bump", M,
        lambda x: _bump_eval(x, 0, M, c),
        lambda x, n: _bump_eval(x, n, M, c),
    )


def polynomial(coeffs: Sequence[float]) -> TestFunction:
    """Macroscopic profile sum_k coeffs[k] x^k on [-2, 2]."""
    p = Polynomial(list(coeffs))
    return TestFunction("polynomial", 2.0, p, lambda x, n: p.deriv(n)(x), support=(-2.0, 2.0))


def sampled(x: Sequence[float], y: Sequence[float], M: float, degree: int = 5) -> TestFunction:
    """Interpolating B-spline through samples, zero outside [-M, M]."""
    spline = make_interp_spline(np.asarray(x, dtype=float), np.asarray(y, dtype=float), k=degree)

    def value(t, n: int = 0):
        t = np.asarray(t, dtype=float)
        if n > degree:
            out = np.zeros_like(t)
        else:
            out = np.where(np.abs(t) < M, spline.derivative(n)(t) if n else spline(t), 0.0)
        return float(out) if out.ndim == 0 else out

    return TestFunction("custom-sampled", M, value, value)


def window_profile(f: TestFunction, window: SpectralWindow, sign: int = 1) -> TestFunction:
    """x -> (1/eta) f(((x - E) rho_E - sign*omega)/eta), the profile whose trace is the linear statistic."""
    E, rho, eta, omega = window.E, window.rho, window.eta, window.omega

    def arg(x):
        return ((np.asarray(x, dtype=float) - E) * rho - sign * omega) / eta

    lo = E + (sign * omega - f.M * eta) / rho
    hi = E + (sign * omega + f.M * eta) / rho
    return TestFunction(
        "custom", f.M,
        lambda x: f(arg(x)) / eta,
        lambda x, n: f.derivative(arg(x), n) * (rho / eta) ** n / eta,
        support=(lo, hi),
    )


# -- almost-analytic extension --------------------------------------------

def almost_analytic(f: TestFunction, k: int, x, y):
    """sum_{j<=k} (iy)^j f^(j)(x)/j!."""
    if k < 0 or k > MAX_EXTENSION_ORDER:
        raise DomainError(f"extension order must lie in [0, {MAX_EXTENSION_ORDER}], got {k}")
    iy = 1j * np.asarray(y, dtype=float)
    total = np.asarray(f(x), dtype=complex)
    for j in range(1, k + 1):
        total = total + iy ** j * f.derivative(x, j) / math.factorial(j)
    return complex(total) if total.ndim == 0 else total


def dbar_almost_analytic(f: TestFunction, k: int, x, y):
    """d/d(z bar) of the order-k extension: (1/2)(iy)^k f^(k+1)(x)/k!."""
    if k < 0 or k > MAX_EXTENSION_ORDER:
        raise DomainError(f"extension order must lie in [0, {MAX_EXTENSION_ORDER}], got {k}")
    out = 0.5 * (1j * np.asarray(y, dtype=float)) ** k * f.derivative(x, k + 1) / math.factorial(k)
    return complex(out) if np.ndim(out) == 0 else out


def reconstruction_terms(f: TestFunction, lam: float, a: float, k: int, tol: float = 1e-9) -> Dict[str, float]:
    """Contour and area terms of the reconstruction of f(lam) from its extension on the strip |Im z| < a.

    The strip |y| < 1e-6 is excised from the area integral; the integrand
    there is O(|y|^(k-1)) and its contribution is O(1e-12).
    """
    if a <= 0:
        raise DomainError(f"strip half-width must be positive, got {a}")
    if k < 1 or k > MAX_EXTENSION_ORDER:
        raise DomainError(f"reconstruction needs 1 <= k <= {MAX_EXTENSION_ORDER}, got {k}")
    lo, hi = f.support
    kfact = math.factorial(k)
    cut = [lam] if lo < lam < hi else []

    def contour(x: float) -> float:
        z = complex(x, a)
        return (almost_analytic(f, k, x, a) / (lam - z)).imag

    def area(y: float, x: float) -> float:
        d = float(f.derivative(x, k + 1))
        if d == 0.0:
            return 0.0
        return (0.5 * (1j * y) ** k * d / (kfact * complex(lam - x, -y))).real

    contour_term = quad1d(contour, (lo, hi), tol=tol, points=cut) / math.pi
    area_term = 2.0 / math.pi * quad2d(area, ((EXCISION_RADIUS, a), (lo, hi)), tol=tol, points=((), cut))
    return {"contour": contour_term, "area": area_term, "value": contour_term + area_term}


def cauchy_reconstruct(f: TestFunction, lam: float, a: float, k: int, tol: float = 1e-9) -> float:
    """f(lam) recovered from the order-k almost-analytic extension."""
    return reconstruction_terms(f, lam, a, k, tol)["value"]


# -- linear-statistics prediction -----------------------------------------

def _check_supports(window: SpectralWindow, f: TestFunction, g: TestFunction) -> None:
    reach = max(f.M, g.M) * window.eta
    if reach > window.omega:
        raise DomainError(
            f"supports of f+ and g- overlap: M*eta={reach:.4g} exceeds omega={window.omega:.4g}"
        )


def _integrate_scaled(term: Callable[[float, float], float], f: TestFunction, g: TestFunction,
                      tol: float) -> float:
    """Integrate term(s, t) f(s) g(t) with the integrand scaled to order one."""
    scale = abs(term(0.0, 0.0)) or 1.0
    value = quad2d(
        lambda s, t: term(s, t) / scale * float(f(s)) * float(g(t)),
        ((-f.M, f.M), (-g.M, g.M)),
        tol=tol,
    )
    return value * scale


def predicted_linstat_breakdown(window: SpectralWindow, f: TestFunction, g: TestFunction,
                                sums: CumulantSums, beta: int, N: int,
                                zeta_profile: Optional[Sequence[float]] = None,
                                tol: float = 1e-6) -> TermBreakdown:
    """Per-term integral of the unfolded kernel against f+(u) g-(v).

    In the variables u = N(omega + eta s), v = N(-omega + eta t) the weights
    f+(u) du and g-(v) dv become f(s) ds and g(t) dt.
    """
    _check_supports(window, f, g)
    excess = zeta_excess(zeta_profile, beta)
    Nw, Ne = N * window.omega, N * window.eta

    def uv(s: float, t: float) -> Tuple[float, float]:
        return Nw + Ne * s, -Nw + Ne * t

    labels = upsilon_terms(window, Nw, -Nw, sums, beta, N, excess).keys()
    out = TermBreakdown(kind=f"linstat_cov(beta={beta})")
    for label in labels:
        def term(s: float, t: float, label: str = label) -> float:
            u, v = uv(s, t)
            return float(upsilon_terms(window, u, v, sums, beta, N, excess)[label])
        out.add(label, _integrate_scaled(term, f, g, tol))
    out.error_bound = error_bound_upsilon(N, Nw - Ne * f.M, -Nw + Ne * g.M)
    return out


def predicted_linstat_cov(window: SpectralWindow, f: TestFunction, g: TestFunction,
                          sums: CumulantSums, beta: int, N: int,
                          zeta_profile: Optional[Sequence[float]] = None, tol: float = 1e-6) -> float:
    """N^-2 Cov(tr f^eta(H), tr g^eta(H)) predicted by the unfolded kernel."""
    _check_supports(window, f, g)
    excess = zeta_excess(zeta_profile, beta)
    Nw, Ne = N * window.omega, N * window.eta

    def term(s: float, t: float) -> float:
        terms = upsilon_terms(window, Nw + Ne * s, -Nw + Ne * t, sums, beta, N, excess)
        return float(sum(terms.values()))

    return _integrate_scaled(term, f, g, tol)


def boundary_bracket(x1: float, x2: float, E: float, N: int, sums: CumulantSums, beta: int,
                     eps: float = 1e-7) -> float:
    """2 Re C(x1+i0, x2-i0) - 2 Re C'(x1+i0, x2+i0) with one Richardson step in eps."""
    def at(e: float) -> float:
        conj = conjugate_terms(complex(x1, e), complex(x2, -e), E, N, sums, beta).total()
        plain = nonconjugate_terms(complex(x1, e), complex(x2, e), N, sums, beta).total()
        return 2.0 * conj.real - 2.0 * plain.real

    return 2.0 * at(eps / 2.0) - at(eps)


def contour_linstat_cov(window: SpectralWindow, f: TestFunction, g: TestFunction,
                        sums: CumulantSums, beta: int, N: int,
                        eps: float = 1e-7, tol: float = 1e-6) -> float:
    """The same covariance assembled from the Green-function formulas on the real axis."""
    _check_supports(window, f, g)
    E, rho, eta, omega = window.E, window.rho, window.eta, window.omega

    def term(s: float, t: float) -> float:
        x1 = E + (omega + eta * s) / rho
        x2 = E + (-omega + eta * t) / rho
        return boundary_bracket(x1, x2, E, N, sums, beta, eps)

    return _integrate_scaled(term, f, g, tol) / (4.0 * math.pi ** 2 * rho ** 2)
