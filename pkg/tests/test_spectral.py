import math

import numpy as np
import pytest

from core.errors import DomainError, EigenSolverError
from core.spectral import (
    EigenSample,
    SpectralWindow,
    bulk_indices_ok,
    eigen_decompose,
    empirical_stieltjes_power,
    linear_statistic,
    msc_stieltjes,
    quantile,
    semicircle,
    semicircle_cdf,
    sine_kernel,
    sqrt_zsq_minus4,
    window_average,
)


def test_window_geometry(window):
    assert window.E1 == pytest.approx(-0.05)
    assert window.E2 == pytest.approx(0.05)
    assert window.z1 == pytest.approx(complex(-0.05, 0.01))
    assert window.z2 == pytest.approx(complex(0.05, 0.01))
    assert window.rho == pytest.approx(1 / math.pi)
    assert window.kappa == pytest.approx(2.0)


@pytest.mark.parametrize("args", [(2.0, 0.1, 0.01), (0.0, 0.0, 0.01), (0.0, 0.1, -1.0), (0.0, 0.1, 0.01, 0.5)])
def test_window_rejects_bad_parameters(args):
    with pytest.raises(DomainError):
        SpectralWindow(*args)


def test_window_exponents():
    w = SpectralWindow(0.0, 0.01, 0.001)
    assert w.beta_exp(100) == pytest.approx(1.0)
    assert w.alpha(1000) == pytest.approx(1.0)


def test_hypothesis_violations():
    assert SpectralWindow(0.0, 0.02, 0.01).hypothesis_violations(400, 0.1) == []
    issues = SpectralWindow(0.0, 0.02, 0.03).hypothesis_violations(400, 0.1)
    assert any("exceeds omega" in issue for issue in issues)


def test_semicircle_density():
    assert semicircle(0.0)["rho"] == pytest.approx(1 / math.pi)
    assert semicircle(2.0)["rho"] == 0.0
    assert semicircle_cdf(-2.0) == pytest.approx(0.0, abs=1e-15)
    assert semicircle_cdf(0.0) == pytest.approx(0.5)
    assert semicircle_cdf(2.0) == pytest.approx(1.0)


def test_m_solves_self_consistent_equation():
    z = np.array([0.3 + 0.5j, -1.7 + 0.01j, 3.0 + 2.0j, 0.1 - 0.2j])
    m = msc_stieltjes(z)
    assert np.max(np.abs(m * m + z * m + 1)) < 1e-13
    assert np.all(np.abs(m[:3]) < 1)
    assert np.all(m[:3].imag > 0)
    assert msc_stieltjes(complex(z[0])) == pytest.approx(m[0])


@pytest.mark.parametrize("E", [-1.5, -0.5, 0.5, 1.5])
def test_boundary_root_is_i_kappa(E):
    s = sqrt_zsq_minus4(complex(E, 1e-12))
    assert s == pytest.approx(1j * math.sqrt(4 - E * E), abs=1e-9)


def test_empirical_stieltjes():
    eigs = EigenSample(np.array([-1.0, 1.0]))
    assert empirical_stieltjes_power(eigs, 1j) == pytest.approx(0.5j)
    assert empirical_stieltjes_power(eigs, 1j, 2) == pytest.approx(0.0)
    with pytest.raises(DomainError):
        empirical_stieltjes_power(eigs, 0.5 + 0j)
    with pytest.raises(DomainError):
        empirical_stieltjes_power(eigs, 1j, 0)


def test_linear_statistic_of_constant(window):
    eigs = EigenSample(np.linspace(-1, 1, 7))
    assert linear_statistic(eigs, window, np.ones_like, 1) == pytest.approx(7 / window.eta)
    with pytest.raises(DomainError):
        linear_statistic(eigs, window, np.ones_like, 0)


def test_linear_statistic_centres():
    w = SpectralWindow(0.0, 0.1, 0.01)
    centre = w.omega / w.rho
    eigs = EigenSample(np.array([centre]))
    assert linear_statistic(eigs, w, lambda x: np.exp(-x * x), 1) == pytest.approx(1 / w.eta)
    assert linear_statistic(eigs, w, lambda x: np.exp(-x * x), -1) < 1e-100


def test_quantiles():
    assert quantile(200, 400) == 0.0
    assert quantile(400, 400) == 2.0
    assert quantile(1, 4) == pytest.approx(-0.80795, abs=1e-4)
    for k in (1, 37, 250):
        assert semicircle_cdf(quantile(k, 300)) == pytest.approx(k / 300, abs=1e-10)
        assert quantile(k, 300) == pytest.approx(-quantile(300 - k, 300), abs=1e-10)
    with pytest.raises(DomainError):
        quantile(0, 10)


def test_bulk_indices():
    ok, gi, gj = bulk_indices_ok(200, 201, 400, 0.1)
    assert ok and gi < gj
    assert not bulk_indices_ok(1, 2, 400, 0.1)[0]
    # gamma_1 at N=40 lies inside [-1.9, 1.9] but label 1 is an edge label
    ok, gi, _ = bulk_indices_ok(1, 2, 40, 0.1)
    assert gi > -1.9 and not ok
    assert bulk_indices_ok(5, 35, 40, 0.1)[0]


def test_sine_kernel_values():
    k = sine_kernel(0.0)
    assert (k["s"], k["Y1"], k["Y2"]) == (1.0, -1.0, -1.0)
    assert k["Y1_avg_asym"] == float("-inf")
    assert sine_kernel(3.0)["Y2"] == pytest.approx(0.0, abs=1e-30)
    assert sine_kernel(2.5)["Y2"] == pytest.approx(-1 / (2.5 * math.pi) ** 2)


def test_averaged_kernel_matches_expansion():
    U = 50.0
    avg = window_average(lambda u: sine_kernel(u)["Y1"], U, 5.0)
    asym = window_average(lambda u: sine_kernel(u)["Y1_avg_asym"], U, 5.0)
    assert abs(avg - asym) <= 10 * U ** -6


def test_window_average_of_constant():
    assert window_average(lambda u: 3.0, 1.0, 2.0, n_points=10) == pytest.approx(3.0)


def test_eigen_decompose_sorted():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((30, 30))
    H = (A + A.T) / 2
    sample = eigen_decompose(H, 5)
    assert sample.sample_index == 5
    assert sample.N == 30
    assert np.all(np.diff(sample.eigenvalues) >= 0)
    assert np.allclose(sample.eigenvalues, np.linalg.eigvalsh(H))


def test_eigen_decompose_rejects_nonfinite():
    H = np.eye(4)
    H[1, 2] = H[2, 1] = np.nan
    with pytest.raises(EigenSolverError):
        eigen_decompose(H, 0)
