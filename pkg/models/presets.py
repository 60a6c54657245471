#models/presets.py
from typing import Dict, List, Optional

from core.ensemble import EnsembleSpec
from core.errors import ConfigError
from models.schemas import EnsembleModel, validate

PRESETS: Dict[str, Dict] = {
    "goe": {
        "label": "GOE",
        "ensemble": {"beta": 1, "offdiag": {"family": "gaussian"}, "diag": {"family": "gaussian"}},
        "tags": ["gaussian", "real", "canonical diagonal"]
    },
    "gue": {
        "label": "GUE",
        "ensemble": {"beta": 2, "offdiag": {"family": "gaussian"}, "diag": {"family": "gaussian"}},
        "tags": ["gaussian", "complex", "canonical diagonal"]
    },
    "rademacher": {
        "label": "Symmetric Bernoulli",
        "ensemble": {"beta": 1, "offdiag": {"family": "rademacher"}, "diag": {"family": "rademacher"}},
        "tags": ["real", "negative fourth cumulant"]
    },
    "uniform": {
        "label": "Uniform entries",
        "ensemble": {"beta": 1, "offdiag": {"family": "uniform"}, "diag": {"family": "uniform"}},
        "tags": ["real", "negative fourth cumulant"]
    },
    "skew_diag": {
        "label": "Skewed diagonal",
        "ensemble": {"beta": 1, "offdiag": {"family": "gaussian"},
                     "diag": {"family": "two_point", "p": 0.2, "a_over_sigma": 1.0}},
        "tags": ["real", "third cumulant on the diagonal"]
    },
    "phase_four": {
        "label": "Fourth roots of unity",
        "ensemble": {"beta": 2, "offdiag": {"family": "phase_four"}, "diag": {"family": "rademacher"}},
        "tags": ["complex", "negative fourth cumulant"]
    },
}


class PresetManager:
    def __init__(self, presets: Dict[str, Dict] = PRESETS):
        self._p = presets

    def list_presets(self) -> List[str]:
        return list(self._p.keys())

    def valid(self, name: Optional[str]) -> str:
        if not name:
            return "goe"
        key = name.strip().lower()
        if key in self._p:
            return key
        raise ConfigError(f"unknown preset '{name}', expected one of {self.list_presets()}")

    def model(self, name: Optional[str], N: int, zeta="canonical") -> EnsembleModel:
        data = dict(self._p[self.valid(name)]["ensemble"], N=N, zeta=zeta)
        return validate(EnsembleModel, data)

    def spec(self, name: Optional[str], N: int, zeta="canonical") -> EnsembleSpec:
        return self.model(name, N, zeta).to_domain()

    def describe(self, name: str) -> str:
        preset = self._p[self.valid(name)]
        return f"{preset['label']} ({', '.join(preset['tags'])})"


preset_manager = PresetManager()
