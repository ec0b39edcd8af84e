"""Continuous piecewise-C1 curves: the representable Lipschitz admissible functions.

Pointwise checks run at segment-interior Chebyshev positions kept a margin
away from the breakpoints, which are the null set where the derivative may
jump. Integrals use fixed-order Gauss-Legendre per segment.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.chebyshev import chebpts1
from numpy.polynomial.legendre import leggauss

from noether_kit.config import SamplePlan
from noether_kit.errors import (
    BreakpointProximityError,
    ContinuityError,
    PreconditionError,
    TrajectoryError,
)
from noether_kit.expr import Expr, differentiate, evaluate, evaluate_array, free_variables, parse

logger = logging.getLogger(__name__)

CONTINUITY_TOL = 1e-9

__all__ = [
    "PiecewiseTrajectory",
    "RunningIntegral",
    "SamplePlan",
    "TrajectorySamples",
    "boundary_values",
    "build_trajectory",
    "eval_state",
    "quadrature_along",
    "running_integral",
    "sample_states",
    "sample_times",
    "smooth_arc",
]


@dataclass(frozen=True)
class PiecewiseTrajectory:
    n: int
    breakpoints: Tuple[float, ...]
    segments: Tuple[Tuple[Expr, ...], ...]
    velocities: Tuple[Tuple[Expr, ...], ...]
    lipschitz_bound: float
    name: str = ""

    @property
    def interval(self) -> Tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def segment_count(self) -> int:
        return len(self.segments)

    def segment_bounds(self, k: int) -> Tuple[float, float]:
        return self.breakpoints[k], self.breakpoints[k + 1]

    def margin(self, k: int, plan: SamplePlan) -> float:
        lo, hi = self.segment_bounds(k)
        return plan.margin_fraction * (hi - lo)

    def segment_state(self, k: int, times: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Positions and velocities of segment k at the given times, each (n, len)."""
        times = np.asarray(times, dtype=float)
        env = {"t": times}
        x = np.stack([np.broadcast_to(evaluate_array(e, env), times.shape) for e in self.segments[k]])
        v = np.stack([np.broadcast_to(evaluate_array(e, env), times.shape) for e in self.velocities[k]])
        return x, v

    def segment_index(self, t: float) -> int:
        a, b = self.interval
        if not a <= t <= b:
            raise ValueError(f"t={t!r} lies outside [{a}, {b}]")
        k = bisect.bisect_right(self.breakpoints, t) - 1
        return min(k, self.segment_count - 1)


@dataclass(frozen=True)
class TrajectorySamples:
    """State at the a.e. sample set: times (N,), x and v (n, N), segment ids (N,)."""

    times: np.ndarray
    x: np.ndarray
    v: np.ndarray
    segment: np.ndarray

    def bindings(self) -> Dict[str, np.ndarray]:
        env = {"t": self.times}
        for i in range(self.x.shape[0]):
            env[f"x{i + 1}"] = self.x[i]
            env[f"v{i + 1}"] = self.v[i]
        return env


def _resolve_breakpoint(value: Union[float, str], n: int) -> float:
    if isinstance(value, str):
        e = parse(value, n)
        if free_variables(e):
            raise TrajectoryError(f"breakpoint '{value}' is not a constant expression")
        return evaluate(e, {})
    return float(value)


def _check_segment(e: Expr, source: str) -> None:
    extra = sorted(free_variables(e) - {"t"})
    if extra:
        raise TrajectoryError(f"segment '{source}' may only depend on t; found {extra}")


def build_trajectory(
    n: int,
    interval: Tuple[float, float],
    breakpoints: Sequence[Union[float, str]],
    segments: Sequence[Sequence[str]],
    *,
    name: str = "",
    plan: SamplePlan = SamplePlan(),
) -> PiecewiseTrajectory:
    a, b = float(interval[0]), float(interval[1])
    points = [_resolve_breakpoint(value, n) for value in breakpoints]
    if len(points) < 2:
        raise TrajectoryError("need at least two breakpoints")
    if not (math.isclose(points[0], a, rel_tol=1e-12, abs_tol=1e-12) and math.isclose(points[-1], b, rel_tol=1e-12, abs_tol=1e-12)):
        raise TrajectoryError(f"breakpoints must run from {a} to {b}, got {points[0]} .. {points[-1]}")
    points[0], points[-1] = a, b
    if any(lo >= hi for lo, hi in zip(points, points[1:], strict=False)):
        raise TrajectoryError(f"breakpoints must be strictly increasing: {points}")
    if len(segments) != len(points) - 1:
        raise TrajectoryError(f"{len(points) - 1} segments expected, got {len(segments)}")

    parsed: List[Tuple[Expr, ...]] = []
    for sources in segments:
        if len(sources) != n:
            raise TrajectoryError(f"each segment needs {n} coordinates, got {list(sources)}")
        coords = tuple(parse(source, n) for source in sources)
        for e, source in zip(coords, sources, strict=True):
            _check_segment(e, source)
        parsed.append(coords)
    rates = tuple(tuple(differentiate(e, "t") for e in coords) for coords in parsed)

    for k in range(1, len(parsed)):
        at = points[k]
        for i in range(n):
            left = evaluate(parsed[k - 1][i], {"t": at})
            right = evaluate(parsed[k][i], {"t": at})
            jump = abs(left - right)
            if jump > CONTINUITY_TOL * (1.0 + abs(left)):
                raise ContinuityError(i + 1, at, jump)

    draft = PiecewiseTrajectory(
        n=n,
        breakpoints=tuple(points),
        segments=tuple(parsed),
        velocities=rates,
        lipschitz_bound=0.0,
        name=name,
    )
    samples = sample_states(draft, plan)
    bound = float(np.max(np.abs(samples.v))) if samples.v.size else 0.0
    if not math.isfinite(bound):
        raise TrajectoryError(f"trajectory '{name}' has an unbounded derivative")
    logger.debug("trajectory %s: %d segments, Lipschitz bound %g", name or "<anonymous>", len(parsed), bound)
    return PiecewiseTrajectory(
        n=n,
        breakpoints=tuple(points),
        segments=tuple(parsed),
        velocities=rates,
        lipschitz_bound=bound,
        name=name,
    )


def smooth_arc(n: int, interval: Tuple[float, float], sources: Sequence[str], name: str = "") -> PiecewiseTrajectory:
    """Single-segment trajectory."""
    return build_trajectory(n, interval, [interval[0], interval[1]], [list(sources)], name=name)


def eval_state(
    traj: PiecewiseTrajectory,
    t: float,
    *,
    with_velocity: bool = True,
    plan: SamplePlan = SamplePlan(),
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """x(t) and, away from corners, x'(t)."""
    k = traj.segment_index(t)
    if with_velocity:
        for j in range(1, traj.segment_count):
            corner = traj.breakpoints[j]
            margin = min(traj.margin(j - 1, plan), traj.margin(j, plan))
            if abs(t - corner) < margin:
                raise BreakpointProximityError(t, corner)
    x, v = traj.segment_state(k, np.asarray([t]))
    return x[:, 0], (v[:, 0] if with_velocity else None)


def _segment_sample_times(traj: PiecewiseTrajectory, k: int, plan: SamplePlan) -> np.ndarray:
    lo, hi = traj.segment_bounds(k)
    margin = traj.margin(k, plan)
    lo, hi = lo + margin, hi - margin
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * chebpts1(plan.samples_per_segment)


def sample_times(traj: PiecewiseTrajectory, plan: SamplePlan = SamplePlan()) -> np.ndarray:
    return np.concatenate([_segment_sample_times(traj, k, plan) for k in range(traj.segment_count)])


def sample_states(traj: PiecewiseTrajectory, plan: SamplePlan = SamplePlan()) -> TrajectorySamples:
    times, xs, vs, ids = [], [], [], []
    for k in range(traj.segment_count):
        ts = _segment_sample_times(traj, k, plan)
        x, v = traj.segment_state(k, ts)
        times.append(ts)
        xs.append(x)
        vs.append(v)
        ids.append(np.full(ts.shape, k))
    return TrajectorySamples(
        times=np.concatenate(times),
        x=np.concatenate(xs, axis=1),
        v=np.concatenate(vs, axis=1),
        segment=np.concatenate(ids),
    )


@lru_cache(maxsize=16)
def _gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    return leggauss(order)


def _reject_foreign_symbols(integrand: Expr) -> None:
    bad = sorted(n for n in free_variables(integrand) if n == "s" or n.startswith("a"))
    if bad:
        raise PreconditionError(f"integrands along a trajectory may not contain {bad}")


def _partial_integrals(
    traj: PiecewiseTrajectory,
    integrand: Expr,
    k: int,
    ends: np.ndarray,
    plan: SamplePlan,
) -> np.ndarray:
    """Integral of the integrand over [t_k, end] within segment k, for each end."""
    nodes, weights = _gauss_legendre(plan.quadrature_nodes)
    lo = traj.breakpoints[k]
    half = 0.5 * (np.asarray(ends, dtype=float) - lo)
    grid = (lo + half)[:, None] + half[:, None] * nodes[None, :]
    x, v = traj.segment_state(k, grid.ravel())
    env = {"t": grid.ravel()}
    for i in range(traj.n):
        env[f"x{i + 1}"] = x[i]
        env[f"v{i + 1}"] = v[i]
    values = np.broadcast_to(evaluate_array(integrand, env), grid.ravel().shape).reshape(grid.shape)
    return half * (values @ weights)


def _segment_totals(traj: PiecewiseTrajectory, integrand: Expr, plan: SamplePlan) -> np.ndarray:
    return np.array(
        [
            _partial_integrals(traj, integrand, k, np.array([traj.breakpoints[k + 1]]), plan)[0]
            for k in range(traj.segment_count)
        ]
    )


def quadrature_along(traj: PiecewiseTrajectory, integrand: Expr, plan: SamplePlan = SamplePlan()) -> float:
    """Integral of integrand(t, x(t), x'(t)) over [a, b], segment by segment."""
    _reject_foreign_symbols(integrand)
    return float(np.sum(_segment_totals(traj, integrand, plan)))


class RunningIntegral:
    """F(t) = integral from a to t of an integrand along a trajectory."""

    def __init__(self, traj: PiecewiseTrajectory, integrand: Expr, plan: SamplePlan):
        _reject_foreign_symbols(integrand)
        self.traj = traj
        self.integrand = integrand
        self.plan = plan
        self.offsets = np.concatenate([[0.0], np.cumsum(_segment_totals(traj, integrand, plan))])

    def __call__(self, t):
        times = np.atleast_1d(np.asarray(t, dtype=float))
        result = np.empty(times.shape)
        segments = np.array([self.traj.segment_index(float(tj)) for tj in times])
        for k in np.unique(segments):
            mask = segments == k
            partial = _partial_integrals(self.traj, self.integrand, int(k), times[mask], self.plan)
            result[mask] = self.offsets[k] + partial
        return float(result[0]) if np.ndim(t) == 0 else result

    @property
    def total(self) -> float:
        return float(self.offsets[-1])


def running_integral(traj: PiecewiseTrajectory, integrand: Expr, plan: SamplePlan = SamplePlan()) -> RunningIntegral:
    return RunningIntegral(traj, integrand, plan)


def boundary_values(traj: PiecewiseTrajectory) -> Tuple[np.ndarray, np.ndarray]:
    """(x(a), x(b)) for checking boundary conditions."""
    a, b = traj.interval
    start, _ = eval_state(traj, a, with_velocity=False)
    end, _ = eval_state(traj, b, with_velocity=False)
    return start, end
