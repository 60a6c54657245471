#models/schemas.py
"""Validated JSON surface for ensembles, windows and experiments."""
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from core.ensemble import EnsembleSpec, EntryDistribution, Family
from core.errors import ConfigError, DomainError
from core.orchestrator import ExperimentConfig
from core.spectral import SpectralWindow
from utils.rng import resolve_seed

M = TypeVar("M", bound=BaseModel)


def parse_complex(value: Any) -> complex:
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", "").replace("i", "j"))
    return complex(value)


class EntryLawModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: Family = Family.GAUSSIAN
    scale: float = Field(1.0, ge=0.0)
    p: float = Field(0.5, gt=0.0, lt=1.0)
    a_over_sigma: float = 1.0
    complex_valued: bool = False

    def to_domain(self) -> EntryDistribution:
        return EntryDistribution(self.family, self.scale, self.p, self.a_over_sigma, self.complex_valued)


class EnsembleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    beta: Literal[1, 2] = 1
    N: int = Field(..., ge=2)
    offdiag: EntryLawModel = Field(default_factory=EntryLawModel)
    diag: EntryLawModel = Field(default_factory=EntryLawModel)
    zeta: Union[Literal["canonical", "zero"], List[float]] = "canonical"
    zeta_max: float = Field(10.0, gt=0.0)

    def to_domain(self) -> EnsembleSpec:
        if self.zeta == "canonical":
            zeta = None
        elif self.zeta == "zero":
            zeta = [0.0] * self.N
        else:
            zeta = list(self.zeta)
        return EnsembleSpec(self.beta, self.N, self.offdiag.to_domain(), self.diag.to_domain(),
                            None if zeta is None else tuple(zeta), self.zeta_max)


class WindowModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    E: float = 0.0
    omega: float = Field(..., gt=0.0)
    eta: float = Field(..., gt=0.0)
    M: float = Field(1.0, ge=1.0)

    def to_domain(self) -> SpectralWindow:
        return SpectralWindow(self.E, self.omega, self.eta, self.M)


class ExperimentModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ensemble: EnsembleModel
    window: WindowModel
    n_samples: int = Field(..., gt=0)
    batch_count: int = Field(20, ge=2)
    master_seed: Optional[int] = Field(None, ge=0)
    observables: List[str] = Field(default_factory=lambda: ["green_cov_conjugate"])
    z: Any = Field(complex(0.3, 0.5), validate_default=True)
    profile: List[float] = Field(default_factory=lambda: [0.0, 0.0, 1.0])
    tau: float = Field(0.1, gt=0.0, lt=1.0)
    quad_tol: float = Field(1e-6, gt=0.0)

    @field_validator("z", mode="before")
    @classmethod
    def _parse_z(cls, value: Any) -> complex:
        try:
            return parse_complex(value)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"cannot read a complex number from {value!r}") from exc

    def to_domain(self, default_seed: Optional[int] = None) -> ExperimentConfig:
        seed = resolve_seed(self.master_seed if self.master_seed is not None else default_seed)
        return ExperimentConfig(
            spec=self.ensemble.to_domain(),
            window=self.window.to_domain(),
            n_samples=self.n_samples,
            batch_count=self.batch_count,
            master_seed=seed,
            observables=tuple(self.observables),
            z=self.z,
            profile=tuple(self.profile),
            tau=self.tau,
            quad_tol=self.quad_tol,
        )


def validate(model: Type[M], data: Dict[str, Any]) -> M:
    """pydantic validation with errors surfaced as ConfigError."""
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigError(f"invalid {model.__name__}: {problems}") from exc


def load_experiment(data: Dict[str, Any], default_seed: Optional[int] = None) -> ExperimentConfig:
    model = validate(ExperimentModel, data)
    try:
        return model.to_domain(default_seed)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
