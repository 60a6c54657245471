# utils/rng.py

"""Counter-based random streams.

Every Monte Carlo sample draws from its own Philox stream keyed by
(master_seed, sample_index), so a sample is a pure function of that pair and
does not depend on which worker produced it or in which order.
"""
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.errors import ConfigError

SEED_ENV = "MESOCOV_SEED"
_KEY_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Philox stream for one sample."""
    master_seed: int
    sample_index: int

    def __post_init__(self):
        if self.master_seed < 0 or self.sample_index < 0:
            raise ValueError(
                f"seed and index must be nonnegative, got ({self.master_seed}, {self.sample_index})"
            )

    @property
    def key(self) -> int:
        # 128-bit Philox key: high word seed, low word index
        return ((self.master_seed & _KEY_MASK) << 64) | (self.sample_index & _KEY_MASK)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key))


def stream(master_seed: int, sample_index: int) -> RngStream:
    return RngStream(master_seed, sample_index)


def resolve_seed(configured: Optional[int], default: int = 20240101) -> int:
    """Master seed: MESOCOV_SEED wins over any configured value."""
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env.strip())
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env!r}")
    return default if configured is None else int(configured)
