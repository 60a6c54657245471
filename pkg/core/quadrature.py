# core/quadrature.py

"""Adaptive quadrature wrappers that fail loudly."""
from typing import Callable, Iterable, Optional, Sequence, Tuple

from scipy import integrate

from core.errors import QuadratureError

DEFAULT_LIMIT = 200


def quad1d(fn: Callable[[float], float], interval: Tuple[float, float], tol: float = 1e-10,
           points: Optional[Sequence[float]] = None, limit: int = DEFAULT_LIMIT) -> float:
    """Adaptive Gauss-Kronrod with |error| <= tol * max(1, |result|)."""
    a, b = interval
    if a == b:
        return 0.0
    inner_points = None
    if points:
        lo, hi = min(a, b), max(a, b)
        inner_points = sorted(p for p in points if lo < p < hi) or None
    out = integrate.quad(fn, a, b, epsabs=tol, epsrel=tol, limit=limit,
                         points=inner_points, full_output=1)
    value, abserr = out[0], out[1]
    # a fourth element is the QUADPACK warning message
    if len(out) > 3 and abserr > tol * max(1.0, abs(value)):
        raise QuadratureError(f"quad1d on [{a}, {b}]: {out[3].splitlines()[0]}", value, abserr)
    return float(value)


def quad2d(fn: Callable[[float, float], float], box: Tuple[Tuple[float, float], Tuple[float, float]],
           tol: float = 1e-8, points: Tuple[Iterable[float], Iterable[float]] = ((), ()),
           limit: int = DEFAULT_LIMIT) -> float:
    """Nested adaptive rule over box = ((x0, x1), (y0, y1)); the inner variable is y.

    The inner integrals run at a tenth of the outer tolerance so their noise
    stays below what the outer rule resolves.
    """
    (x0, x1), (y0, y1) = box
    px, py = list(points[0]), list(points[1])

    def inner(x: float) -> float:
        return quad1d(lambda y: fn(x, y), (y0, y1), tol=0.1 * tol, points=py, limit=limit)

    return quad1d(inner, (x0, x1), tol=tol, points=px, limit=limit)
