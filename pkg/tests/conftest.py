# tests/conftest.py
import pytest

from core.ensemble import EnsembleSpec, EntryDistribution, Family
from core.orchestrator import ExperimentConfig
from core.spectral import SpectralWindow
from utils.logger import logger


@pytest.fixture(autouse=True)
def quiet_logger():
    logger.configure(level="WARNING", rich_terminal=False)
    logger.events.clear()
    yield


@pytest.fixture
def goe_small():
    return EnsembleSpec(1, 40)


@pytest.fixture
def gue_small():
    return EnsembleSpec(2, 40)


@pytest.fixture
def rademacher_spec():
    law = EntryDistribution(Family.RADEMACHER)
    return EnsembleSpec(1, 200, law, law)


@pytest.fixture
def window():
    return SpectralWindow(0.0, 0.1, 0.01, 1.0)


@pytest.fixture
def small_config(goe_small):
    """A fast run: 20 batches of 40 samples at N=40."""
    def make(**overrides):
        params = dict(
            spec=goe_small,
            window=SpectralWindow(0.0, 0.4, 0.1, 1.0),
            n_samples=800,
            batch_count=20,
            master_seed=11,
            observables=("green_cov_conjugate", "mean_stieltjes"),
        )
        params.update(overrides)
        return ExperimentConfig(**params)
    return make
