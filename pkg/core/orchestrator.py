#core/orchestrator.py
"""Monte Carlo experiment orchestrator."""
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Tuple

from core.accumulator import McAccumulator, McEstimate
from core.ensemble import EnsembleSpec, sample_wigner
from core.errors import ConfigError, EigenSolverError, NumericalFailure
from core.resource_manager import WorkerPool
from core.spectral import SpectralWindow, eigen_decompose
from experiments import BaseObservable, registry
from utils.logger import logger
from utils.rng import stream

MIN_BATCHES = 20
MIN_SAMPLES_PER_BATCH = 40

BatchResult = Dict[str, McAccumulator]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a Monte Carlo run."""
    spec: EnsembleSpec
    window: SpectralWindow
    n_samples: int
    batch_count: int = MIN_BATCHES
    master_seed: int = 20240101
    observables: Tuple[str, ...] = ("green_cov_conjugate",)
    z: complex = complex(0.3, 0.5)
    profile: Tuple[float, ...] = (0.0, 0.0, 1.0)
    tau: float = 0.1
    quad_tol: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "observables", tuple(self.observables))
        object.__setattr__(self, "profile", tuple(float(c) for c in self.profile))
        object.__setattr__(self, "z", complex(self.z))
        if self.batch_count < MIN_BATCHES:
            raise ConfigError(f"batch_count must be at least {MIN_BATCHES}, got {self.batch_count}")
        if self.n_samples < MIN_SAMPLES_PER_BATCH * self.batch_count:
            raise ConfigError(
                f"n_samples must be at least {MIN_SAMPLES_PER_BATCH}*batch_count="
                f"{MIN_SAMPLES_PER_BATCH * self.batch_count}, got {self.n_samples}"
            )
        if not self.observables:
            raise ConfigError("at least one observable is required")
        if self.z.imag <= 0:
            raise ConfigError(f"z must lie in the upper half plane, got {self.z}")
        if not 0.0 < self.tau < 1.0:
            raise ConfigError(f"tau must lie in (0, 1), got {self.tau}")

    def to_dict(self) -> Dict:
        spec = self.spec
        return {
            "ensemble": {
                "beta": spec.beta,
                "N": spec.N,
                "offdiag": _law_dict(spec.offdiag),
                "diag": _law_dict(spec.diag),
                "zeta": "canonical" if spec.zeta is None else list(spec.zeta),
                "zeta_max": spec.zeta_max,
            },
            "window": self.window.to_dict(),
            "n_samples": self.n_samples,
            "batch_count": self.batch_count,
            "master_seed": self.master_seed,
            "observables": list(self.observables),
            "z": {"re": self.z.real, "im": self.z.imag},
            "profile": list(self.profile),
            "tau": self.tau,
            "quad_tol": self.quad_tol,
        }

    def fingerprint(self) -> str:
        """Stable hash of the run definition; resumed batches must match it."""
        text = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _law_dict(law) -> Dict:
    return {
        "family": law.family.value,
        "scale": law.scale,
        "p": law.p,
        "a_over_sigma": law.a_over_sigma,
        "complex_valued": law.complex_valued,
    }


class ExperimentOrchestrator:
    """Runs the sample loop batch by batch and folds the results in batch order."""

    def __init__(self, cfg: ExperimentConfig, threads: Optional[int] = None,
                 on_batch: Optional[Callable[[int, BatchResult], None]] = None,
                 completed: Optional[Dict[int, BatchResult]] = None):
        self.cfg = cfg
        self.observables: List[BaseObservable] = [registry.build(name, cfg) for name in cfg.observables]
        self.on_batch = on_batch
        self.results: Dict[int, BatchResult] = dict(completed or {})
        self.pool = WorkerPool(cfg.n_samples, cfg.batch_count, threads, completed=set(self.results))

    def _check_window(self) -> None:
        for issue in self.cfg.window.hypothesis_violations(self.cfg.spec.N, self.cfg.tau):
            logger.warning(f"window outside the asymptotic regime: {issue}")

    def run_batch(self, batch: int) -> BatchResult:
        """All samples of one batch, in index order."""
        accs = {obs.label: obs.new_accumulator() for obs in self.observables}
        for k in self.pool.samples_in(batch):
            H = sample_wigner(self.cfg.spec, stream(self.cfg.master_seed, k))
            try:
                sample = eigen_decompose(H, k)
            except EigenSolverError as exc:
                logger.warning(str(exc))
                for acc in accs.values():
                    acc.record_failure(batch)
                continue
            for obs in self.observables:
                x, y = obs.values(sample)
                accs[obs.label].add(batch, x, y)
        return accs

    def _total_failures(self) -> int:
        if not self.results:
            return 0
        label = self.observables[0].label
        return sum(result[label].failures for result in self.results.values() if label in result)

    def run(self) -> Dict[str, McEstimate]:
        cfg = self.cfg
        logger.header(f"simulate  beta={cfg.spec.beta}  N={cfg.spec.N}  samples={cfg.n_samples}")
        self._check_window()
        pending = self.pool.pending_batches()
        if len(pending) < cfg.batch_count:
            logger.step("resuming", f"{cfg.batch_count - len(pending)} batches restored")
        logger.step("sampling", f"{len(pending)} batches on {self.pool.workers} threads")

        budget = self.pool.failure_budget()
        with ThreadPoolExecutor(max_workers=self.pool.workers) as ex:
            futures = {ex.submit(self.run_batch, b): b for b in pending}
            try:
                for fut in as_completed(futures):
                    batch = futures[fut]
                    self.results[batch] = fut.result()
                    self.pool.mark_done([batch])
                    if self._total_failures() > budget:
                        raise NumericalFailure(
                            f"{self._total_failures()} eigensolver failures exceed the budget of {budget}"
                        )
                    if self.on_batch:
                        self.on_batch(batch, self.results[batch])
                    logger.batch_done(batch, cfg.batch_count, len(self.pool.samples_in(batch)))
            except BaseException:
                for fut in futures:
                    fut.cancel()
                raise

        return self.estimates()

    def estimates(self) -> Dict[str, McEstimate]:
        """Deterministic fold of all batch results in batch order."""
        out = {}
        for obs in self.observables:
            total = obs.new_accumulator()
            for batch in sorted(self.results):
                total = total.merge(self.results[batch][obs.label])
            out[obs.label] = total.estimate(self.cfg.master_seed)
        return out


def run_experiment(cfg: ExperimentConfig, threads: Optional[int] = None,
                   on_batch: Optional[Callable[[int, BatchResult], None]] = None,
                   completed: Optional[Dict[int, BatchResult]] = None) -> Dict[str, McEstimate]:
    return ExperimentOrchestrator(cfg, threads, on_batch, completed).run()


def gustavsson_experiment(cfg: ExperimentConfig, i: int, j: int, threads: Optional[int] = None) -> McEstimate:
    """Estimate corr(lambda_i, lambda_j) across samples."""
    if i > j:
        i, j = j, i
    label = f"gustavsson({i},{j})"
    result = run_experiment(replace(cfg, observables=(label,)), threads)
    return result[label]
