# core/errors.py

"""Exceptions shared across the library and the CLI."""
from typing import Optional


class ConfigError(ValueError):
    """Invalid ensemble, window or experiment configuration."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class CoincidentSpectralParameter(DomainError):
    """s(z1) = ±s(z2): a pole of the f-functions."""

    def __init__(self, z1: complex, z2: complex):
        super().__init__(f"coincident spectral parameter: z1={z1}, z2={z2}")
        self.z1 = z1
        self.z2 = z2


class NumericalFailure(RuntimeError):
    """A numerical routine did not deliver the requested accuracy."""


class QuadratureError(NumericalFailure):
    """Adaptive quadrature hit its subdivision limit."""

    def __init__(self, message: str, best: float, abserr: float):
        super().__init__(f"{message} (best estimate {best!r}, achieved error {abserr:.3e})")
        self.best = best
        self.abserr = abserr


class EigenSolverError(NumericalFailure):
    """The eigensolver failed to converge for one sample."""

    def __init__(self, sample_index: Optional[int], reason: str = ""):
        super().__init__(f"eigensolver failed on sample {sample_index}: {reason}")
        self.sample_index = sample_index
