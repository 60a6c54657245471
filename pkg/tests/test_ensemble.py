import math

import numpy as np
import pytest

from core.ensemble import (
    EnsembleSpec,
    EntryDistribution,
    Family,
    cumulant_sums,
    entry_cumulants,
    sample_wigner,
)
from core.errors import ConfigError
from models.presets import preset_manager
from utils.rng import stream


@pytest.mark.parametrize("family, m3, m4", [
    (Family.GAUSSIAN, 0.0, 3.0),
    (Family.RADEMACHER, 0.0, 1.0),
    (Family.UNIFORM, 0.0, 1.8),
])
def test_standard_moments(family, m3, m4):
    got = EntryDistribution(family).standard_moments()
    assert got == pytest.approx((m3, m4))


def test_two_point_moments():
    m3, m4 = EntryDistribution(Family.TWO_POINT, p=0.2).standard_moments()
    assert m3 == pytest.approx(1.5)
    assert m4 == pytest.approx(3.25)


def test_two_point_is_scale_free():
    a = EntryDistribution(Family.TWO_POINT, p=0.3, a_over_sigma=1.0).standard_moments()
    b = EntryDistribution(Family.TWO_POINT, p=0.3, a_over_sigma=7.5).standard_moments()
    assert a == pytest.approx(b)


def test_two_point_depends_only_on_the_sign_of_a():
    up = EntryDistribution(Family.TWO_POINT, p=0.3, a_over_sigma=0.2)._two_point_values()
    down = EntryDistribution(Family.TWO_POINT, p=0.3, a_over_sigma=-4.0)._two_point_values()
    assert up == pytest.approx((math.sqrt(0.7 / 0.3), -math.sqrt(0.3 / 0.7)))
    assert down == pytest.approx((-up[0], -up[1]))


def test_phase_four_is_complex():
    law = EntryDistribution(Family.PHASE_FOUR)
    assert law.complex_valued
    assert entry_cumulants(law, 2)["C22"] == pytest.approx(-1.0)
    with pytest.raises(ConfigError):
        law.standard_moments()


@pytest.mark.parametrize("family, c22", [
    (Family.GAUSSIAN, 0.0),
    (Family.RADEMACHER, -1.0),
    (Family.UNIFORM, -0.6),
])
def test_complexified_fourth_cumulant(family, c22):
    assert EntryDistribution(family).complex_cumulants()["C22"] == pytest.approx(c22)


def test_real_cumulants_scale():
    c = EntryDistribution(Family.RADEMACHER).scaled(0.5).real_cumulants()
    assert c["C2"] == pytest.approx(0.25)
    assert c["C4"] == pytest.approx(-2.0 * 0.5 ** 4)


@pytest.mark.parametrize("kwargs", [
    {"scale": -1.0},
    {"family": Family.TWO_POINT, "p": 1.0},
    {"family": Family.TWO_POINT, "a_over_sigma": 0.0},
])
def test_entry_law_rejects_bad_parameters(kwargs):
    with pytest.raises(ConfigError):
        EntryDistribution(**kwargs)


def test_spec_validation():
    with pytest.raises(ConfigError):
        EnsembleSpec(3, 10)
    with pytest.raises(ConfigError):
        EnsembleSpec(1, 1)
    with pytest.raises(ConfigError):
        EnsembleSpec(1, 4, zeta=(1.0, 1.0))
    with pytest.raises(ConfigError):
        EnsembleSpec(1, 2, zeta=(-1.0, 1.0))
    with pytest.raises(ConfigError):
        EnsembleSpec(1, 2, zeta=(11.0, 1.0))
    with pytest.raises(ConfigError):
        EnsembleSpec(1, 4, offdiag=EntryDistribution(Family.PHASE_FOUR))


def test_canonical_zeta():
    assert EnsembleSpec(1, 5).is_canonical
    assert EnsembleSpec(2, 5, zeta=(1.0,) * 5).is_canonical
    assert not EnsembleSpec(1, 5, zeta=(0.0,) * 5).is_canonical
    assert np.all(EnsembleSpec(2, 3).zeta_profile() == 1.0)


@pytest.mark.parametrize("beta", [1, 2])
def test_gaussian_sums_vanish_exactly(beta):
    s = cumulant_sums(EnsembleSpec(beta, 50))
    assert s.sum_c4 == 0.0
    assert s.sum_c3_diag == 0.0
    assert s.sum_c22 == 0.0
    assert s.scaled_c4_offdiag == 0.0


def test_gaussian_entry_cumulants_are_exact_zeros():
    law = EntryDistribution(Family.GAUSSIAN).scaled(1 / math.sqrt(50))
    assert law.real_cumulants()["C4"] == 0.0
    assert law.complex_cumulants()["C22"] == 0.0


def test_rademacher_fourth_cumulant_sum(rademacher_spec):
    s = cumulant_sums(rademacher_spec)
    assert s.sum_c4 == pytest.approx(-2.0 * 199 / 200 - 8.0 / 200, rel=1e-12)
    assert s.scaled_c4_offdiag == pytest.approx(-2.0)
    assert s.quartic == s.sum_c4


def test_skewed_diagonal_third_cumulant():
    s = cumulant_sums(preset_manager.spec("skew_diag", 100))
    assert s.sum_c3_diag == pytest.approx(1.5 * 2 ** 1.5 / 10, rel=1e-12)
    assert s.sum_c3_diag == pytest.approx(0.42426, abs=1e-5)


def test_phase_four_c22_sum():
    s = cumulant_sums(preset_manager.spec("phase_four", 50))
    assert s.sum_c22 == pytest.approx(-49 / 50 - 2 / 50)
    assert s.quartic == s.sum_c22
    assert s.sum_c4 == 0.0


def test_sample_is_symmetric_and_reproducible(goe_small):
    H = sample_wigner(goe_small, stream(3, 17))
    assert H.shape == (40, 40)
    assert np.array_equal(H, H.T)
    assert np.array_equal(H, sample_wigner(goe_small, stream(3, 17)))
    assert not np.array_equal(H, sample_wigner(goe_small, stream(3, 18)))


def test_gue_sample_is_hermitian(gue_small):
    H = sample_wigner(gue_small, stream(5, 0))
    assert np.iscomplexobj(H)
    assert np.allclose(H, H.conj().T)
    assert np.all(H.diagonal().imag == 0)


def test_rademacher_entries(rademacher_spec):
    H = sample_wigner(rademacher_spec, stream(1, 2))
    off = H[np.triu_indices(200, k=1)]
    assert np.allclose(np.abs(off), 1 / math.sqrt(200))
    assert np.allclose(np.abs(H.diagonal()), math.sqrt(2 / 200))


def test_zero_diagonal_profile(goe_small):
    spec = goe_small.with_zeta([0.0] * 40)
    H = sample_wigner(spec, stream(2, 4))
    assert np.all(H.diagonal() == 0.0)


def test_offdiagonal_variance():
    spec = EnsembleSpec(1, 300)
    H = sample_wigner(spec, stream(9, 0))
    off = H[np.triu_indices(300, k=1)]
    assert np.var(off) * 300 == pytest.approx(1.0, rel=0.05)
