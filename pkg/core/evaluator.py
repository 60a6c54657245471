#core/evaluator.py

"""Comparison of Monte Carlo estimates with theory predictions."""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

from core.accumulator import McEstimate
from core.theory import TermBreakdown
from utils.logger import logger

DEFAULT_THRESHOLD = 0.15
Z_LIMIT = 3.0


@dataclass
class Report:
    observable: str
    verdict: str
    z_score: float
    relative: float
    estimate: complex
    stderr: float
    prediction: complex
    error_bound: float
    terms: Dict[str, complex] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> Dict[str, Any]:
        def j(v: complex) -> Dict[str, float]:
            return {"re": v.real, "im": v.imag}
        return {
            "observable": self.observable,
            "verdict": self.verdict,
            "z_score": self.z_score,
            "relative": self.relative,
            "estimate": j(self.estimate),
            "stderr": self.stderr,
            "prediction": j(self.prediction),
            "error_bound": self.error_bound,
            "terms": {k: j(v) for k, v in self.terms.items()},
        }


def compare(est: McEstimate, prediction: TermBreakdown, threshold: float = DEFAULT_THRESHOLD) -> Report:
    """PASS if the deviation is within 3 combined standard errors or `threshold` relative."""
    total = prediction.total()
    delta = abs(est.mean - total)
    scale = math.hypot(est.stderr, prediction.error_bound)
    if scale > 0:
        z = delta / scale
    else:
        z = 0.0 if delta == 0 else math.inf
    if total != 0:
        relative = delta / abs(total)
    else:
        relative = 0.0 if delta == 0 else math.inf
    verdict = "PASS" if z <= Z_LIMIT or relative <= threshold else "FAIL"
    return Report(
        observable=est.observable or prediction.kind,
        verdict=verdict,
        z_score=z,
        relative=relative,
        estimate=est.mean,
        stderr=est.stderr,
        prediction=total,
        error_bound=prediction.error_bound,
        terms=dict(prediction.terms),
    )


def ratio_estimate(numerator: McEstimate, denominator: McEstimate) -> McEstimate:
    """numerator/denominator with a first-order propagated standard error."""
    if denominator.mean == 0:
        raise ZeroDivisionError(f"ratio against a zero estimate of {denominator.observable}")
    ratio = numerator.mean / denominator.mean
    rel = math.hypot(numerator.stderr / abs(numerator.mean) if numerator.mean else 0.0,
                     denominator.stderr / abs(denominator.mean))
    return McEstimate(
        mean=ratio,
        stderr=abs(ratio) * rel,
        n_samples=min(numerator.n_samples, denominator.n_samples),
        batch_count=min(numerator.batch_count, denominator.batch_count),
        seed=numerator.seed,
        failures=numerator.failures + denominator.failures,
        observable=f"{numerator.observable}/{denominator.observable}",
    )


class PredictionEvaluator:
    """Joins estimates with predictions by observable label."""

    def __init__(self, threshold: float = DEFAULT_THRESHOLD):
        self.threshold = threshold
        self.reports: List[Report] = []

    def evaluate(self, estimates: Dict[str, McEstimate], predictions: Dict[str, TermBreakdown],
                 show: bool = True) -> List[Report]:
        reports = []
        for label, est in estimates.items():
            if label not in predictions:
                logger.warning(f"no prediction for {label}; skipped")
                continue
            report = compare(est, predictions[label], self.threshold)
            reports.append(report)
            if show:
                self.show(report)
        self.reports.extend(reports)
        return reports

    def compare_ratio(self, numerator: McEstimate, denominator: McEstimate, expected: float,
                      label: str = "leading_ratio") -> Report:
        """E.g. the GUE/GOE ratio of conjugate covariances against 1/2."""
        prediction = TermBreakdown(kind=label)
        prediction.add(label, expected)
        return compare(ratio_estimate(numerator, denominator), prediction, self.threshold)

    @staticmethod
    def show(report: Report) -> None:
        rows = [(k, v) for k, v in report.terms.items()]
        rows += [("stderr", report.stderr), ("error_bound", report.error_bound)]
        logger.report(report.observable, report.verdict, report.z_score, report.relative,
                      report.estimate, report.prediction, rows)

    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)


evaluator = PredictionEvaluator()
