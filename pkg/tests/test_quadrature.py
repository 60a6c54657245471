import math

import pytest

from core.errors import NumericalFailure, QuadratureError
from core.quadrature import quad1d, quad2d


def test_quad1d():
    assert quad1d(math.sin, (0.0, math.pi)) == pytest.approx(2.0, abs=1e-12)
    assert quad1d(math.sin, (1.0, 1.0)) == 0.0


def test_quad1d_with_kink():
    assert quad1d(abs, (-1.0, 2.0), points=[0.0, 5.0]) == pytest.approx(2.5, abs=1e-12)


def test_quad2d_inner_variable_is_y():
    value = quad2d(lambda x, y: x * y * y, ((0.0, 1.0), (0.0, 3.0)))
    assert value == pytest.approx(0.5 * 9.0, rel=1e-10)


def test_quad1d_fails_loudly():
    with pytest.raises(QuadratureError) as info:
        quad1d(lambda x: math.sin(1.0 / x) / x, (1e-6, 1.0), tol=1e-14, limit=5)
    assert isinstance(info.value, NumericalFailure)
    assert math.isfinite(info.value.best)
