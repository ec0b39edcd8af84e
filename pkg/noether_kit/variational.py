"""Lagrangian systems and the expression-level pieces of the necessary conditions."""

import functools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Sequence, Tuple

import numpy as np
import sympy as sp

from noether_kit.config import SamplePlan, SamplingBox
from noether_kit.errors import (
    DerivativeValidationError,
    EvaluationDomainError,
    PreconditionError,
)
from noether_kit.expr import (
    Expr,
    Point,
    coordinate,
    differentiate,
    evaluate,
    evaluate_array,
    free_variables,
    parse,
    simplify,
    to_source,
)
from noether_kit.trajectory import PiecewiseTrajectory, quadrature_along

logger = logging.getLogger(__name__)

FD_STEP = 1e-5
FD_TOL = 1e-6


@dataclass(frozen=True)
class LagrangianSystem:
    n: int
    interval: Tuple[float, float]
    L: Expr
    Lt: Expr
    Lx: Tuple[Expr, ...]
    Lv: Tuple[Expr, ...]
    source: str = ""

    @property
    def is_autonomous(self) -> bool:
        return "t" not in free_variables(self.L)


def _reject_foreign_symbols(e: Expr, what: str) -> None:
    bad = sorted(n for n in free_variables(e) if n == "s" or n.startswith("a"))
    if bad:
        raise PreconditionError(f"{what} may only depend on (t, x, v); found {bad}")


def richardson_slope(value_at: Callable[[float], float], centre: float) -> Tuple[float, float]:
    """Slope at centre from central differences with steps h and h/2.

    h scales with |centre|. Returns the extrapolated slope and the gap between
    the two plain differences; a gap above tolerance marks a point too close
    to a singular locus to say anything.
    """
    h = FD_STEP * max(1.0, abs(centre))
    coarse = (value_at(centre + h) - value_at(centre - h)) / (2.0 * h)
    fine = (value_at(centre + 0.5 * h) - value_at(centre - 0.5 * h)) / h
    return (4.0 * fine - coarse) / 3.0, abs(fine - coarse)


def check_slope(
    label: str,
    wrt: str,
    point: Dict[str, float],
    symbolic: float,
    value_at: Callable[[float], float],
    centre: float,
) -> bool:
    """Compare a symbolic slope with its difference estimate.

    Returns False for an ill-conditioned point, True when they agree, and
    raises DerivativeValidationError when they do not.
    """
    estimate, gap = richardson_slope(value_at, centre)
    tolerance = FD_TOL * (1.0 + abs(symbolic))
    if gap > tolerance:
        logger.debug("skipping %s at %s: step estimates differ by %g", wrt, point, gap)
        return False
    if abs(symbolic - estimate) > tolerance:
        raise DerivativeValidationError(label, wrt, point, symbolic, estimate)
    return True


def _value_along(e: Expr, point: Dict[str, float], name: str, value: float) -> float:
    return evaluate(e, dict(point, **{name: value}))


def validate_partial(
    L: Expr,
    partial: Expr,
    wrt: str,
    box: SamplingBox,
    points: int = 50,
    seed: int = 0,
) -> int:
    """Compare a symbolic partial with finite differences at random points.

    Points where L is undefined or the difference is ill-conditioned are
    redrawn, up to 20 draws per requested point. Returns the number checked.
    """
    rng = np.random.default_rng(seed)
    names = sorted(set(free_variables(L)) | {wrt})
    label = to_source(L)
    checked = attempts = 0
    while checked < points and attempts < 20 * points:
        attempts += 1
        point = box.sample(rng, names)
        try:
            symbolic = evaluate(partial, point)
            value_at = functools.partial(_value_along, L, point, wrt)
            usable = check_slope(label, wrt, point, symbolic, value_at, point[wrt])
        except EvaluationDomainError:
            continue
        checked += usable
    if checked < points:
        logger.warning("only %d of %d points usable to check d/d%s of %s", checked, points, wrt, label)
    return checked


def build_system(
    n: int,
    interval: Tuple[float, float],
    source: str,
    *,
    validation_points: int = 50,
    seed: int = 0,
    half_width: float = 2.0,
) -> LagrangianSystem:
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError(f"interval must satisfy a < b, got [{a}, {b}]")
    L = parse(source, n)
    _reject_foreign_symbols(L, "the Lagrangian")
    Lt = differentiate(L, "t")
    Lx = tuple(differentiate(L, f"x{i}") for i in range(1, n + 1))
    Lv = tuple(differentiate(L, f"v{i}") for i in range(1, n + 1))

    box = SamplingBox.standard(n, (a, b), half_width)
    validate_partial(L, Lt, "t", box, validation_points, seed)
    for i in range(n):
        validate_partial(L, Lx[i], f"x{i + 1}", box, validation_points, seed)
        validate_partial(L, Lv[i], f"v{i + 1}", box, validation_points, seed)

    logger.info("built system n=%d on [%g, %g] with L = %s", n, a, b, to_source(L))
    return LagrangianSystem(n=n, interval=(a, b), L=L, Lt=Lt, Lx=Lx, Lv=Lv, source=source)


def momentum_dot_velocity(sys: LagrangianSystem) -> Expr:
    return sp.Add(*(sys.Lv[i] * coordinate("v", i + 1) for i in range(sys.n)))


def hamiltonian_like(sys: LagrangianSystem) -> Expr:
    """L - Lv . v, the bracket of the DuBois-Reymond condition (no sign flip)."""
    return simplify(sys.L - momentum_dot_velocity(sys))


def weierstrass_excess(sys: LagrangianSystem, base: Point, probe: Sequence[float]) -> float:
    """E = L(t,x,w) - L(t,x,v) - Lv(t,x,v) . (w - v)."""
    if len(probe) != sys.n or base.dimension != sys.n:
        raise ValueError(f"dimension mismatch: system has n={sys.n}")
    probes = np.asarray(probe, dtype=float).reshape(1, sys.n)
    return float(weierstrass_excess_many(sys, base, probes)[0])


def weierstrass_excess_many(sys: LagrangianSystem, base: Point, probes: np.ndarray) -> np.ndarray:
    """Excess for a (k, n) array of probe velocities at one base point."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    at_base = base.bindings()
    at_probe = dict(at_base)
    for i in range(sys.n):
        at_probe[f"v{i + 1}"] = probes[:, i]
    probe_value = np.broadcast_to(evaluate_array(sys.L, at_probe), (probes.shape[0],))
    base_value = evaluate(sys.L, at_base)
    slope = np.zeros(probes.shape[0])
    for i in range(sys.n):
        slope += evaluate(sys.Lv[i], at_base) * (probes[:, i] - base.v[i])
    return probe_value - base_value - slope


def functional_value(sys: LagrangianSystem, traj: PiecewiseTrajectory, plan: SamplePlan = SamplePlan()) -> float:
    """J[x] = integral of L(t, x, x') over [a, b]."""
    return quadrature_along(traj, sys.L, plan)
