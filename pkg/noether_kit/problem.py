"""Problem files: JSON documents declaring a system, a family and trajectories."""

import json
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from noether_kit.config import AnalysisConfig
from noether_kit.errors import NoetherKitError, ProblemFileError
from noether_kit.symmetry import TransformationFamily, build_family
from noether_kit.trajectory import PiecewiseTrajectory, build_trajectory
from noether_kit.variational import LagrangianSystem, build_system

logger = logging.getLogger(__name__)

Verdict = Literal["pass", "fail"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FamilySpec(_Strict):
    T: str
    X: List[str]
    gauge: str = "0"


class BoundarySpec(_Strict):
    alpha: List[float]
    beta: List[float]


class TrajectorySpec(_Strict):
    breakpoints: List[Union[float, str]] = Field(min_length=2)
    segments: List[List[str]] = Field(min_length=1)


class ConfigOverrides(_Strict):
    tol: Optional[float] = Field(default=None, gt=0)
    seed: Optional[int] = None
    samples: Optional[int] = Field(default=None, ge=3)
    probe_bound: Optional[float] = Field(default=None, gt=0)
    probe_grid: Optional[int] = Field(default=None, ge=2)
    probe_random: Optional[int] = Field(default=None, ge=0)
    trials: Optional[int] = Field(default=None, ge=1)
    zero_tol: Optional[float] = Field(default=None, gt=0)
    conservation_tol: Optional[float] = Field(default=None, gt=0)


class TrajectoryExpectation(_Strict):
    euler_lagrange: Optional[Verdict] = None
    dubois_reymond: Optional[Verdict] = None
    weierstrass: Optional[Verdict] = None
    conserved: Optional[bool] = None
    deviation: Optional[float] = None
    deviation_tol: float = 1e-9


class Expectations(_Strict):
    invariance: Optional[Literal["invariant", "not_invariant"]] = None
    noether: Optional[str] = None
    trajectories: Dict[str, TrajectoryExpectation] = Field(default_factory=dict)


class ProblemFile(_Strict):
    name: str
    description: Optional[str] = None
    n: int = Field(ge=1)
    interval: Tuple[float, float]
    lagrangian: str
    family: FamilySpec
    boundary: Optional[BoundarySpec] = None
    trajectories: Dict[str, TrajectorySpec] = Field(default_factory=dict)
    config: ConfigOverrides = Field(default_factory=ConfigOverrides)
    expect: Optional[Expectations] = None

    @model_validator(mode="after")
    def _check_shapes(self) -> "ProblemFile":
        a, b = self.interval
        if not a < b:
            raise ValueError(f"interval must satisfy a < b, got [{a}, {b}]")
        if len(self.family.X) != self.n:
            raise ValueError(f"family.X needs {self.n} components, got {len(self.family.X)}")
        if self.boundary is not None and not (len(self.boundary.alpha) == len(self.boundary.beta) == self.n):
            raise ValueError(f"boundary values need {self.n} components")
        for name, spec in self.trajectories.items():
            if len(spec.segments) != len(spec.breakpoints) - 1:
                raise ValueError(f"trajectory '{name}': {len(spec.breakpoints) - 1} segments expected")
            if any(len(segment) != self.n for segment in spec.segments):
                raise ValueError(f"trajectory '{name}': every segment needs {self.n} coordinates")
        if self.expect is not None:
            unknown = sorted(set(self.expect.trajectories) - set(self.trajectories))
            if unknown:
                raise ValueError(f"expectations for unknown trajectories: {unknown}")
        return self


def load_problem(path: Union[str, Path]) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    try:
        return ProblemFile.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path} is not valid JSON: {exc}") from exc
    except ValidationError as exc:
        raise ProblemFileError(f"{path} does not match the problem schema:\n{exc}") from exc


class Problem:
    """A problem file with its system and family built, trajectories on demand."""

    def __init__(self, spec: ProblemFile, overrides: Optional[Dict[str, object]] = None):
        self.spec = spec
        self.config = AnalysisConfig().with_overrides(**spec.config.model_dump())
        if overrides:
            self.config = self.config.with_overrides(**overrides)
        self.system: LagrangianSystem = build_system(
            spec.n,
            spec.interval,
            spec.lagrangian,
            validation_points=self.config.validation_points,
            seed=self.config.seed,
            half_width=self.config.box_half_width,
        )
        self.family: TransformationFamily = build_family(
            self.system,
            spec.family.T,
            spec.family.X,
            spec.family.gauge,
            config=self.config,
        )
        self._trajectories: Dict[str, PiecewiseTrajectory] = {}

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def trajectory_names(self) -> List[str]:
        return list(self.spec.trajectories)

    @property
    def boundary(self) -> Optional[Tuple[List[float], List[float]]]:
        if self.spec.boundary is None:
            return None
        return self.spec.boundary.alpha, self.spec.boundary.beta

    def trajectory(self, name: str) -> PiecewiseTrajectory:
        if name not in self.spec.trajectories:
            raise ProblemFileError(f"{self.name} has no trajectory '{name}'; known: {self.trajectory_names}")
        if name not in self._trajectories:
            spec = self.spec.trajectories[name]
            self._trajectories[name] = build_trajectory(
                self.spec.n,
                self.spec.interval,
                spec.breakpoints,
                spec.segments,
                name=name,
                plan=self.config.plan,
            )
        return self._trajectories[name]


def open_problem(path: Union[str, Path], overrides: Optional[Dict[str, object]] = None) -> Problem:
    spec = load_problem(path)
    try:
        return Problem(spec, overrides)
    except NoetherKitError:
        raise
    except ValueError as exc:
        raise ProblemFileError(f"{path}: {exc}") from exc
