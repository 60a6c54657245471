import pytest
import yaml

from core.errors import ConfigError
from models.presets import preset_manager
from models.schemas import EnsembleModel, load_experiment, parse_complex, validate

BASE = {
    "ensemble": {"beta": 1, "N": 50},
    "window": {"E": 0.0, "omega": 0.4, "eta": 0.1},
    "n_samples": 800,
}


def _with(**changes):
    data = {k: dict(v) if isinstance(v, dict) else v for k, v in BASE.items()}
    data.update(changes)
    return data


@pytest.mark.parametrize("value", ["0.3+0.5i", "0.3 + 0.5j", [0.3, 0.5], {"re": 0.3, "im": 0.5}])
def test_parse_complex(value):
    assert parse_complex(value) == complex(0.3, 0.5)


def test_minimal_experiment(monkeypatch):
    monkeypatch.delenv("MESOCOV_SEED", raising=False)
    cfg = load_experiment(BASE, default_seed=42)
    assert cfg.spec.N == 50
    assert cfg.master_seed == 42
    assert cfg.observables == ("green_cov_conjugate",)
    assert cfg.z == complex(0.3, 0.5)


def test_default_z_is_a_complex_number(monkeypatch):
    monkeypatch.delenv("MESOCOV_SEED", raising=False)
    cfg = load_experiment(dict(BASE, master_seed=1))
    assert isinstance(cfg.z, complex)
    assert cfg.to_dict()["z"] == {"re": 0.3, "im": 0.5}


def test_experiment_from_yaml_text(monkeypatch):
    monkeypatch.delenv("MESOCOV_SEED", raising=False)
    data = yaml.safe_load(
        "ensemble: {beta: 2, N: 30}\n"
        "window: {E: 0.5, omega: 0.4, eta: 0.1}\n"
        "n_samples: 800\n"
        "z: 0.1+0.7i\n"
        "observables: [mean_stieltjes]\n"
    )
    cfg = load_experiment(data, default_seed=9)
    assert cfg.spec.beta == 2
    assert cfg.z == complex(0.1, 0.7)
    assert cfg.window.E == 0.5


def test_environment_seed_wins(monkeypatch):
    monkeypatch.setenv("MESOCOV_SEED", "777")
    assert load_experiment(_with(master_seed=5)).master_seed == 777


def test_round_trip_keeps_fingerprint(monkeypatch):
    monkeypatch.delenv("MESOCOV_SEED", raising=False)
    data = _with(ensemble={"beta": 2, "N": 30, "offdiag": {"family": "phase_four"},
                           "diag": {"family": "rademacher"}, "zeta": "zero"},
                 z="0.1+0.2i", master_seed=3)
    cfg = load_experiment(data)
    assert all(z == 0.0 for z in cfg.spec.zeta)
    assert load_experiment(cfg.to_dict()).fingerprint() == cfg.fingerprint()


@pytest.mark.parametrize("data, fragment", [
    (_with(extra=1), "extra"),
    (_with(window={"omega": -0.1, "eta": 0.1}), "window.omega"),
    (_with(window={"E": 2.5, "omega": 0.1, "eta": 0.1}), "E must lie"),
    (_with(ensemble={"beta": 3, "N": 50}), "ensemble.beta"),
    (_with(z="not a number"), "z"),
    (_with(batch_count=5), "batch_count"),
    (_with(ensemble={"beta": 1, "N": 50, "offdiag": {"family": "phase_four"}}), "beta=1"),
])
def test_invalid_experiments(data, fragment):
    with pytest.raises(ConfigError) as info:
        load_experiment(data)
    assert fragment in str(info.value)


def test_ensemble_model_defaults():
    model = validate(EnsembleModel, {"N": 10})
    spec = model.to_domain()
    assert spec.beta == 1 and spec.zeta is None


def test_presets():
    assert "goe" in preset_manager.list_presets()
    assert preset_manager.valid("GUE") == "gue"
    assert preset_manager.valid(" skew_diag ") == "skew_diag"
    assert preset_manager.valid(None) == "goe"
    assert preset_manager.spec("phase_four", 20).beta == 2
    assert "third cumulant" in preset_manager.describe("skew_diag")
    with pytest.raises(ConfigError):
        preset_manager.valid("wishart")


@pytest.mark.parametrize("name", ["gu", "Symmetric", "skew", "phase"])
def test_presets_need_exact_names(name):
    with pytest.raises(ConfigError):
        preset_manager.valid(name)
