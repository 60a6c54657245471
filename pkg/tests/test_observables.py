import numpy as np
import pytest

from core.errors import ConfigError
from core.spectral import EigenSample, empirical_stieltjes_power, msc_stieltjes
from core.theory import expected_stieltjes_sq
from experiments import registry


def test_registry_names():
    assert {"green_cov_conjugate", "green_cov_nonconjugate", "green_variance", "mean_stieltjes",
            "mean_stieltjes_sq", "linstat_cov", "linstat_var", "gustavsson"} <= set(registry.names())


@pytest.mark.parametrize("text", [
    "unknown", "gustavsson(a,b)", "green_cov_conjugate)", "gustavsson(3)", "gustavsson(1,2)", "gustavsson(21,40)",
])
def test_registry_rejects(text, small_config):
    with pytest.raises(ConfigError):
        registry.build(text, small_config())


def test_labels_and_modes(small_config):
    cfg = small_config()
    g = registry.build("gustavsson(20, 22)", cfg)
    assert g.label == "gustavsson(20,22)"
    assert g.new_accumulator().mode == "corr"
    assert registry.build("mean_stieltjes", cfg).new_accumulator().mode == "mean"


def test_green_values(small_config):
    cfg = small_config()
    sample = EigenSample(np.linspace(-1.5, 1.5, 40))
    obs = registry.build("green_cov_conjugate", cfg)
    x, y = obs.values(sample)
    w = cfg.window
    assert x == empirical_stieltjes_power(sample, w.z1)
    assert y == empirical_stieltjes_power(sample, w.z2).conjugate()
    assert y != x.conjugate()
    assert obs.reference() == msc_stieltjes(cfg.window.z1)
    nonconj = registry.build("green_cov_nonconjugate", cfg)
    x2, y2 = nonconj.values(sample)
    assert x2 == x and y2 == y.conjugate() and y2.imag > 0


def test_mean_predictions(small_config):
    cfg = small_config(observables=("mean_stieltjes_sq",))
    obs = registry.build("mean_stieltjes_sq", cfg)
    assert obs.prediction().total() == pytest.approx(expected_stieltjes_sq(cfg.z))
    mean = registry.build("mean_stieltjes", cfg).prediction()
    assert mean.terms["m"] == pytest.approx(msc_stieltjes(cfg.z))
    assert mean.error_bound == pytest.approx(1 / 40 ** 2)


def test_linstat_var_values(small_config):
    cfg = small_config(profile=(0.0, 0.0, 1.0))
    obs = registry.build("linstat_var", cfg)
    sample = EigenSample(np.array([-1.0, 0.5, 2.0]))
    assert obs.values(sample) == (pytest.approx(5.25), pytest.approx(5.25))
    # semicircle second moment is 1
    assert obs.reference() == pytest.approx(40.0)


def test_gustavsson_values_are_one_based(small_config):
    obs = registry.build("gustavsson(20,21)", small_config())
    sample = EigenSample(np.arange(40, dtype=float))
    assert obs.values(sample) == (19.0, 20.0)
    assert obs.prediction().total() == pytest.approx(1.0)
