#experiments/base_observable.py
"""Base observable interface and the registry that builds observables by name."""
import re
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Dict, List, Tuple, Type

from core.accumulator import McAccumulator
from core.ensemble import CumulantSums, cumulant_sums
from core.errors import ConfigError
from core.spectral import EigenSample
from core.theory import TermBreakdown

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$")


class BaseObservable(ABC):
    """One estimand of a Monte Carlo run.

    Subclasses turn a spectrum into a pair (x, y) fed to the accumulator and
    provide the matching theory prediction.
    """

    name: str = ""
    mode: str = "cov"

    def __init__(self, cfg, *args):
        self.cfg = cfg
        self.args = args

    @property
    def label(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"

    @cached_property
    def sums(self) -> CumulantSums:
        return cumulant_sums(self.cfg.spec)

    @property
    def zeta_profile(self):
        spec = self.cfg.spec
        return None if spec.is_canonical else spec.zeta_profile()

    def reference(self) -> complex:
        """Known centre of x, subtracted before accumulation."""
        return 0j

    def new_accumulator(self) -> McAccumulator:
        return McAccumulator(mode=self.mode, shift=self.reference(), observable=self.label)

    @abstractmethod
    def values(self, sample: EigenSample) -> Tuple[complex, complex]:
        """(x, y) for one sampled spectrum."""
        pass

    @abstractmethod
    def prediction(self) -> TermBreakdown:
        pass

    def validate(self) -> None:
        """Raise ConfigError if this observable cannot run under cfg."""
        pass


class ObservableRegistry:
    """Maps observable names to classes; parses `name` or `name(a, b)`."""

    def __init__(self):
        self._classes: Dict[str, Type[BaseObservable]] = {}

    def register(self, cls: Type[BaseObservable]) -> Type[BaseObservable]:
        self._classes[cls.name] = cls
        return cls

    def names(self) -> List[str]:
        return sorted(self._classes)

    def build(self, text: str, cfg) -> BaseObservable:
        match = _CALL.match(text)
        if not match or match.group(1) not in self._classes:
            raise ConfigError(f"unknown observable '{text}', expected one of {self.names()}")
        raw = match.group(2)
        try:
            args = tuple(int(a) for a in raw.split(",")) if raw and raw.strip() else ()
        except ValueError as exc:
            raise ConfigError(f"observable arguments must be integers: '{text}'") from exc
        observable = self._classes[match.group(1)](cfg, *args)
        observable.validate()
        return observable


registry = ObservableRegistry()


def register(cls: Type[BaseObservable]) -> Type[BaseObservable]:
    return registry.register(cls)


def scalar_breakdown(kind: str, terms: Dict[str, complex], error_bound: float) -> TermBreakdown:
    out = TermBreakdown(kind=kind, error_bound=error_bound)
    for label, value in terms.items():
        out.add(label, value)
    return out

