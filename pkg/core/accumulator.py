# core/accumulator.py

"""Mergeable streaming sums and the batch-means estimators built on them."""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional

import numpy as np

from core.errors import ConfigError, NumericalFailure

MODES = ("mean", "cov", "corr")


def _c(value: Dict[str, float]) -> complex:
    return complex(value["re"], value["im"])


def _j(value: complex) -> Dict[str, float]:
    value = complex(value)
    return {"re": value.real, "im": value.imag}


@dataclass
class BatchSums:
    """Running sums of one contiguous block of samples."""
    batch: int
    count: int = 0
    sum_x: complex = 0j
    sum_y: complex = 0j
    sum_xy: complex = 0j
    sum_xx: float = 0.0
    sum_yy: float = 0.0
    failures: int = 0

    def add(self, x: complex, y: complex = 0j) -> None:
        self.count += 1
        self.sum_x += x
        self.sum_y += y
        self.sum_xy += x * y
        self.sum_xx += abs(x) ** 2
        self.sum_yy += abs(y) ** 2

    def merge(self, other: "BatchSums") -> "BatchSums":
        if other.batch != self.batch:
            raise ValueError(f"cannot merge batch {other.batch} into batch {self.batch}")
        return BatchSums(
            batch=self.batch,
            count=self.count + other.count,
            sum_x=self.sum_x + other.sum_x,
            sum_y=self.sum_y + other.sum_y,
            sum_xy=self.sum_xy + other.sum_xy,
            sum_xx=self.sum_xx + other.sum_xx,
            sum_yy=self.sum_yy + other.sum_yy,
            failures=self.failures + other.failures,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "batch": self.batch,
            "count": self.count,
            "sum_x": _j(self.sum_x),
            "sum_y": _j(self.sum_y),
            "sum_xy": _j(self.sum_xy),
            "sum_xx": self.sum_xx,
            "sum_yy": self.sum_yy,
            "failures": self.failures,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BatchSums":
        return cls(
            batch=int(data["batch"]),
            count=int(data["count"]),
            sum_x=_c(data["sum_x"]),
            sum_y=_c(data["sum_y"]),
            sum_xy=_c(data["sum_xy"]),
            sum_xx=float(data["sum_xx"]),
            sum_yy=float(data["sum_yy"]),
            failures=int(data.get("failures", 0)),
        )


@dataclass
class McEstimate:
    mean: complex
    stderr: float
    n_samples: int
    batch_count: int
    seed: int
    stderr_real: float = 0.0
    stderr_imag: float = 0.0
    failures: int = 0
    observable: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "observable": self.observable,
            "mean": _j(self.mean),
            "stderr": self.stderr,
            "stderr_real": self.stderr_real,
            "stderr_imag": self.stderr_imag,
            "n_samples": self.n_samples,
            "batch_count": self.batch_count,
            "seed": self.seed,
            "failures": self.failures,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "McEstimate":
        mean = data["mean"]
        return cls(
            mean=_c(mean) if isinstance(mean, dict) else complex(mean),
            stderr=float(data["stderr"]),
            n_samples=int(data["n_samples"]),
            batch_count=int(data["batch_count"]),
            seed=int(data["seed"]),
            stderr_real=float(data.get("stderr_real", 0.0)),
            stderr_imag=float(data.get("stderr_imag", 0.0)),
            failures=int(data.get("failures", 0)),
            observable=data.get("observable", ""),
        )


def batch_of(index: int, n_samples: int, batch_count: int) -> int:
    """Contiguous block that sample `index` belongs to."""
    return index * batch_count // n_samples


def batch_range(batch: int, n_samples: int, batch_count: int) -> range:
    """Sample indices of one block, the inverse of batch_of."""
    start = -(-batch * n_samples // batch_count)
    stop = -(-(batch + 1) * n_samples // batch_count)
    return range(start, stop)


@dataclass
class McAccumulator:
    """Per-batch sums for one observable.

    Values are stored shifted by `shift` (subtracted from x only), which
    keeps products near zero when x fluctuates around a known reference such
    as m(z). Covariances are shift-invariant; means add it back.
    """
    mode: str = "cov"
    shift: complex = 0j
    observable: str = ""
    batches: Dict[int, BatchSums] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown estimator mode '{self.mode}', expected one of {MODES}")

    def _batch(self, batch: int) -> BatchSums:
        if batch not in self.batches:
            self.batches[batch] = BatchSums(batch)
        return self.batches[batch]

    def add(self, batch: int, x: complex, y: complex = 0j) -> None:
        self._batch(batch).add(complex(x) - self.shift, complex(y))

    def add_many(self, batch: int, xs: Iterable[complex], ys: Optional[Iterable[complex]] = None) -> None:
        xs = list(xs)
        ys = [0j] * len(xs) if ys is None else list(ys)
        for x, y in zip(xs, ys):
            self.add(batch, x, y)

    def record_failure(self, batch: int) -> None:
        self._batch(batch).failures += 1

    def merge(self, other: "McAccumulator") -> "McAccumulator":
        if (other.mode, other.shift) != (self.mode, self.shift):
            raise ValueError("cannot merge accumulators with different mode or shift")
        merged = dict(self.batches)
        for b in sorted(other.batches):
            merged[b] = merged[b].merge(other.batches[b]) if b in merged else other.batches[b]
        return McAccumulator(self.mode, self.shift, self.observable or other.observable, merged)

    @property
    def n_samples(self) -> int:
        return sum(b.count for b in self.batches.values())

    @property
    def failures(self) -> int:
        return sum(b.failures for b in self.batches.values())

    def _totals(self) -> BatchSums:
        total = BatchSums(-1)
        for b in sorted(self.batches):
            s = self.batches[b]
            total = total.merge(BatchSums(-1, s.count, s.sum_x, s.sum_y, s.sum_xy, s.sum_xx, s.sum_yy, s.failures))
        return total

    @staticmethod
    def _corr(count: int, sx: complex, sy: complex, sxy: complex, sxx: float, syy: float) -> float:
        mx, my = sx / count, sy / count
        cov = (sxy / count - mx * my).real
        vx = sxx / count - abs(mx) ** 2
        vy = syy / count - abs(my) ** 2
        if vx <= 0 or vy <= 0:
            return 0.0
        return cov / math.sqrt(vx * vy)

    def estimate(self, seed: int = 0) -> McEstimate:
        """Grand estimate with a batch-means standard error."""
        blocks = [self.batches[b] for b in sorted(self.batches) if self.batches[b].count > 0]
        total = self._totals()
        n = total.count
        if n < 2 or len(blocks) < 2:
            raise NumericalFailure(f"{self.observable or self.mode}: need at least two non-empty batches, got {len(blocks)}")
        mx, my = total.sum_x / n, total.sum_y / n

        if self.mode == "mean":
            value = mx + self.shift
            per_batch = [s.sum_x / s.count + self.shift for s in blocks]
        elif self.mode == "cov":
            value = (total.sum_xy / n - mx * my) * n / (n - 1)
            per_batch = [s.sum_xy / s.count - mx * s.sum_y / s.count - my * s.sum_x / s.count + mx * my
                         for s in blocks]
        else:
            value = self._corr(n, total.sum_x, total.sum_y, total.sum_xy, total.sum_xx, total.sum_yy)
            per_batch = [self._corr(s.count, s.sum_x, s.sum_y, s.sum_xy, s.sum_xx, s.sum_yy) for s in blocks]

        c = np.asarray(per_batch, dtype=complex)
        root_b = math.sqrt(c.size)
        se_re = float(np.std(c.real, ddof=1)) / root_b
        se_im = float(np.std(c.imag, ddof=1)) / root_b
        return McEstimate(
            mean=complex(value),
            stderr=math.hypot(se_re, se_im),
            n_samples=n,
            batch_count=len(blocks),
            seed=seed,
            stderr_real=se_re,
            stderr_imag=se_im,
            failures=total.failures,
            observable=self.observable,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "shift": _j(self.shift),
            "observable": self.observable,
            "batches": [self.batches[b].to_dict() for b in sorted(self.batches)],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "McAccumulator":
        batches = {int(b["batch"]): BatchSums.from_dict(b) for b in data.get("batches", [])}
        return cls(data["mode"], _c(data["shift"]), data.get("observable", ""), batches)
