"""Configuration dataclasses and their defaults.

Values are layered: the defaults below, then a problem file's ``config``
block, then command-line flags (see ``AnalysisConfig.with_overrides``).
"""

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_S_SAMPLES = (0.1, -0.1, 0.05, -0.05, 0.01, -0.01)


@dataclass(frozen=True)
class SamplingBox:
    """Axis-aligned box of variable bounds for randomized identity testing."""

    bounds: Tuple[Tuple[str, float, float], ...]

    def __post_init__(self):
        for name, lo, hi in self.bounds:
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
                raise ValueError(f"invalid bounds for {name}: [{lo}, {hi}]")

    @classmethod
    def standard(
        cls,
        dimension: int,
        interval: Tuple[float, float],
        half_width: float = 2.0,
        epsilon: float = 0.5,
    ) -> "SamplingBox":
        a, b = interval
        bounds = [("t", float(a), float(b)), ("s", -epsilon, epsilon)]
        for kind in ("x", "v", "a"):
            bounds.extend((f"{kind}{i}", -half_width, half_width) for i in range(1, dimension + 1))
        return cls(tuple(bounds))

    def as_dict(self) -> Dict[str, Tuple[float, float]]:
        return {name: (lo, hi) for name, lo, hi in self.bounds}

    def sample(self, rng: np.random.Generator, names: Iterable[str]) -> Dict[str, float]:
        limits = self.as_dict()
        point = {}
        for name in names:
            lo, hi = limits[name]
            point[name] = float(rng.uniform(lo, hi))
        return point


@dataclass(frozen=True)
class IdentityTestConfig:
    trials: int = 64
    tol: float = 1e-9
    seed: int = 0
    retry_factor: int = 20

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    @property
    def retry_cap(self) -> int:
        return self.retry_factor * self.trials


@dataclass(frozen=True)
class SamplePlan:
    """How a trajectory is sampled: interior Chebyshev points and quadrature nodes."""

    samples_per_segment: int = 17
    margin_fraction: float = 1e-6
    quadrature_nodes: int = 32

    def __post_init__(self):
        if self.samples_per_segment < 3:
            raise ValueError(f"need at least 3 samples per segment, got {self.samples_per_segment}")
        if self.margin_fraction <= 0:
            raise ValueError("margin fraction must be positive")
        if self.quadrature_nodes < 1:
            raise ValueError("need at least one quadrature node")


@dataclass(frozen=True)
class ProbeConfig:
    """Velocity probes discharging the 'for all w' of the Weierstrass condition."""

    bound: Optional[float] = None
    grid: int = 41
    random: int = 64
    seed: int = 0
    max_grid_points: int = 4096

    def resolved_bound(self, lipschitz_bound: float) -> float:
        if self.bound is not None:
            if self.bound < 2.0 * lipschitz_bound:
                logger.warning(
                    "velocity bound %g is below twice the trajectory Lipschitz bound %g; "
                    "the Weierstrass check may miss failures",
                    self.bound,
                    lipschitz_bound,
                )
            return self.bound
        return max(2.0 * lipschitz_bound, 2.0)


@dataclass(frozen=True)
class AnalysisConfig:
    tol: float = 1e-6
    seed: int = 0
    samples: int = 17
    probe_bound: Optional[float] = None
    probe_grid: int = 41
    probe_random: int = 64
    trials: int = 64
    zero_tol: float = 1e-9
    conservation_tol: float = 1e-6
    classical_tol: float = 1e-8
    quadrature_nodes: int = 32
    box_half_width: float = 2.0
    epsilon: float = 0.5
    s_samples: Tuple[float, ...] = field(default=DEFAULT_S_SAMPLES)
    validation_points: int = 50

    def with_overrides(self, **overrides) -> "AnalysisConfig":
        """Apply the overrides that are not None; unknown names are an error."""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
        given = {k: v for k, v in overrides.items() if v is not None}
        if "s_samples" in given:
            given["s_samples"] = tuple(given["s_samples"])
        return replace(self, **given)

    @property
    def plan(self) -> SamplePlan:
        return SamplePlan(samples_per_segment=self.samples, quadrature_nodes=self.quadrature_nodes)

    @property
    def identity(self) -> IdentityTestConfig:
        return IdentityTestConfig(trials=self.trials, tol=self.zero_tol, seed=self.seed)

    @property
    def probes(self) -> ProbeConfig:
        return ProbeConfig(
            bound=self.probe_bound,
            grid=self.probe_grid,
            random=self.probe_random,
            seed=self.seed,
        )

    def box(self, dimension: int, interval: Tuple[float, float]) -> SamplingBox:
        return SamplingBox.standard(dimension, interval, self.box_half_width, self.epsilon)
