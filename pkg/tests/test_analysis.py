import math

import numpy as np
import pytest

from core.analysis import (
    almost_analytic,
    bump,
    dbar_almost_analytic,
    polynomial,
    predicted_linstat_breakdown,
    predicted_linstat_cov,
    reconstruction_terms,
    sampled,
    window_profile,
)
from core.ensemble import CumulantSums
from core.errors import DomainError
from core.quadrature import quad1d
from core.spectral import SpectralWindow


@pytest.fixture(scope="module")
def f():
    return bump(1.0)


@pytest.mark.parametrize("M", [1.0, 2.5])
def test_bump_has_unit_mass(M):
    g = bump(M)
    assert quad1d(g, (-M, M)) == pytest.approx(1.0, abs=1e-10)
    assert g(M) == 0.0
    assert g(-1.5 * M) == 0.0


def test_bump_normalization_constant(f):
    assert f(0.0) * math.e == pytest.approx(2.25229, abs=1e-4)


def test_bump_derivatives_match_differences(f):
    h = 1e-5
    for n in (1, 2, 3):
        fd = (f.derivative(0.3 + h, n - 1) - f.derivative(0.3 - h, n - 1)) / (2 * h)
        assert f.derivative(0.3, n) == pytest.approx(fd, rel=1e-5)


def test_bump_vanishes_to_all_orders_at_the_edge(f):
    for n in range(5):
        assert abs(f.derivative(0.999999, n)) < 1e-30


def test_bump_vectorized(f):
    x = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
    assert np.allclose(f(x), [f(float(t)) for t in x])


def test_bump_rejects_nonpositive_radius():
    with pytest.raises(DomainError):
        bump(0.0)


def test_polynomial_profile():
    p = polynomial([1.0, 0.0, 3.0])
    assert p(2.0) == pytest.approx(13.0)
    assert p.derivative(2.0, 1) == pytest.approx(12.0)
    assert p.derivative(2.0, 3) == pytest.approx(0.0)
    assert p.support == (-2.0, 2.0)


def test_combine():
    p = polynomial([0.0, 1.0]).combine(polynomial([1.0]), -1.0)
    assert p(3.0) == pytest.approx(2.0)
    assert p.derivative(3.0, 1) == pytest.approx(1.0)


def test_sampled_profile(f):
    x = np.linspace(-1.0, 1.0, 201)
    g = sampled(x, f(x), 1.0)
    assert g(0.123) == pytest.approx(f(0.123), abs=1e-5)
    assert g(1.5) == 0.0


def test_window_profile_mass(f):
    w = SpectralWindow(0.0, 0.1, 0.02)
    profile = window_profile(f, w, 1)
    lo, hi = profile.support
    assert lo == pytest.approx(w.E + (w.omega - w.eta) / w.rho)
    assert quad1d(profile, (lo, hi), tol=1e-9) == pytest.approx(1.0 / w.rho, rel=1e-7)


def test_almost_analytic_extension(f):
    assert almost_analytic(f, 3, 0.3, 0.0) == pytest.approx(f(0.3))
    assert dbar_almost_analytic(f, 2, 0.3, 0.0) == 0
    with pytest.raises(DomainError):
        almost_analytic(f, 20, 0.3, 0.1)


@pytest.mark.parametrize("k", [1, 2, 4])
def test_dbar_vanishes_to_order_k(f, k):
    ratio = dbar_almost_analytic(f, k, 0.3, 0.02) / dbar_almost_analytic(f, k, 0.3, 0.01)
    assert abs(ratio) == pytest.approx(2.0 ** k, rel=1e-12)


def test_reconstruction_recovers_value(f):
    terms = reconstruction_terms(f, 0.3, 0.5, 3)
    assert terms["value"] == pytest.approx(f(0.3), abs=1e-6)
    assert terms["value"] == pytest.approx(terms["contour"] + terms["area"])


def test_reconstruction_rejects_bad_strip(f):
    with pytest.raises(DomainError):
        reconstruction_terms(f, 0.3, 0.0, 3)
    with pytest.raises(DomainError):
        reconstruction_terms(f, 0.3, 0.5, 0)


def test_linstat_prediction_breakdown(f):
    w = SpectralWindow(0.0, 0.1, 0.02)
    sums = CumulantSums.gaussian(1, 400)
    breakdown = predicted_linstat_breakdown(w, f, f, sums, 1, 400)
    total = predicted_linstat_cov(w, f, f, sums, 1, 400)
    assert breakdown.terms["leading"].real < 0
    assert breakdown.total().real == pytest.approx(total, rel=1e-4)
    assert breakdown.error_bound > 0


def test_overlapping_supports_rejected(f):
    w = SpectralWindow(0.0, 0.01, 0.02)
    with pytest.raises(DomainError):
        predicted_linstat_cov(w, f, f, CumulantSums.gaussian(1, 400), 1, 400)
