#core/resource_manager.py

"""Worker and batch allocation for Monte Carlo runs."""
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set

from core.accumulator import batch_range
from core.errors import ConfigError

FAILURE_FRACTION = 1e-3


def available_threads() -> int:
    """Usable CPUs for this process."""
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


@dataclass
class WorkerPool:
    """Splits n_samples into contiguous batches and tracks which are done."""
    n_samples: int
    batch_count: int
    threads: Optional[int] = None
    completed: Set[int] = field(default_factory=set)

    def __post_init__(self):
        if self.batch_count < 2:
            raise ConfigError(f"batch_count must be at least 2, got {self.batch_count}")
        if self.n_samples < 2 * self.batch_count:
            raise ConfigError(
                f"n_samples={self.n_samples} gives fewer than two samples per batch (batch_count={self.batch_count})"
            )
        if self.threads is None or self.threads <= 0:
            self.threads = available_threads()
        self.completed = set(self.completed)

    def samples_in(self, batch: int) -> range:
        return batch_range(batch, self.n_samples, self.batch_count)

    def pending_batches(self) -> List[int]:
        return [b for b in range(self.batch_count) if b not in self.completed]

    def mark_done(self, batches: Iterable[int]) -> None:
        self.completed.update(batches)

    @property
    def workers(self) -> int:
        """Threads actually worth starting."""
        return max(1, min(self.threads, len(self.pending_batches())))

    def failure_budget(self) -> int:
        """Largest tolerated number of failed samples."""
        return int(FAILURE_FRACTION * self.n_samples)

    def snapshot(self) -> Dict:
        return {
            'n_samples': self.n_samples,
            'batch_count': self.batch_count,
            'threads': self.threads,
            'completed': sorted(self.completed),
            'pending': len(self.pending_batches()),
        }
