"""One-parameter transformation families, invariance checks and Noether quantities.

A family maps (t, x, v) to (T, X) depending on a group parameter s and is
allowed an exact-differential gauge term. Quasi-invariance is decided as the
pointwise identity R(t, x, v, a) == 0 of the first-order expansion, which is
what the conservation law uses; the finite-s classical check integrates the
functional along smooth test arcs instead.
"""

import functools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from noether_kit.config import AnalysisConfig, SamplePlan, SamplingBox
from noether_kit.errors import (
    EvaluationDomainError,
    IdentityViolationError,
    PreconditionError,
    TimeReparametrizationError,
)
from noether_kit.expr import (
    Expr,
    ZeroVerdict,
    coordinate,
    differentiate,
    evaluate,
    evaluate_array,
    free_variables,
    is_identically_zero,
    parse,
    simplify,
    substitute,
    symbol,
    to_source,
    total_time_derivative,
)
from noether_kit.trajectory import PiecewiseTrajectory, quadrature_along, sample_states, smooth_arc
from noether_kit.variational import LagrangianSystem, check_slope, momentum_dot_velocity

logger = logging.getLogger(__name__)

DEFAULT_ARC_SOURCES = ("t^2", "sin(t)")


class InvarianceStatus(str, Enum):
    INVARIANT = "invariant"
    NOT_INVARIANT = "not_invariant"


@dataclass(frozen=True)
class TransformationFamily:
    T: Expr
    X: Tuple[Expr, ...]
    gauge: Expr
    tau: Expr
    xi: Tuple[Expr, ...]
    sources: Tuple[str, ...] = ()

    @property
    def is_point_transformation(self) -> bool:
        """True when T and X depend on (t, x, s) only."""
        names = set(free_variables(self.T)).union(*(free_variables(c) for c in self.X))
        return not any(name.startswith("v") for name in names)

    @property
    def is_gauge_free(self) -> bool:
        return simplify(self.gauge) == 0


@dataclass(frozen=True)
class InvarianceVerdict:
    status: InvarianceStatus
    max_residual: float
    witness: Optional[Dict[str, float]] = None
    residual: Optional[Expr] = None
    detail: str = ""

    @property
    def is_invariant(self) -> bool:
        return self.status is InvarianceStatus.INVARIANT


def _at_identity(e: Expr) -> Expr:
    return substitute(e, {"s": 0})


def _generator(e: Expr) -> Expr:
    """d e / d s at s = 0: differentiate first, substitute after."""
    return simplify(_at_identity(differentiate(e, "s")))


def _check_identity(component: str, expr: Expr, target: str, box: SamplingBox, config: AnalysisConfig) -> None:
    verdict = is_identically_zero(_at_identity(expr) - symbol(target), box, config.identity)
    if not verdict.is_zero:
        raise IdentityViolationError(component, verdict.witness or {}, verdict.value or 0.0)


def _at_parameter(expr: Expr, point: Dict[str, float], s: float) -> float:
    return evaluate(expr, dict(point, s=s))


def _validate_generator(component: str, expr: Expr, generator: Expr, box: SamplingBox, config: AnalysisConfig) -> None:
    rng = np.random.default_rng(config.seed)
    names = sorted((free_variables(expr) | free_variables(generator)) - {"s"})
    checked = attempts = 0
    while checked < config.validation_points and attempts < 20 * config.validation_points:
        attempts += 1
        point = box.sample(rng, names)
        try:
            symbolic = evaluate(generator, point)
            value_at = functools.partial(_at_parameter, expr, point)
            checked += check_slope(component, "s", point, symbolic, value_at, 0.0)
        except EvaluationDomainError:
            continue
    if checked < config.validation_points:
        logger.warning(
            "only %d of %d points usable to check the generator of %s", checked, config.validation_points, component
        )


def build_family(
    sys: LagrangianSystem,
    T: str,
    X: Sequence[str],
    gauge: str = "0",
    *,
    config: AnalysisConfig = AnalysisConfig(),
) -> TransformationFamily:
    if len(X) != sys.n:
        raise ValueError(f"X needs {sys.n} components, got {len(X)}")
    T_expr = parse(T, sys.n)
    X_expr = tuple(parse(source, sys.n) for source in X)
    gauge_expr = parse(gauge, sys.n)

    for name, e in [("T", T_expr), ("gauge", gauge_expr)] + [(f"X{i + 1}", c) for i, c in enumerate(X_expr)]:
        accelerations = sorted(v for v in free_variables(e) if v.startswith("a"))
        if accelerations:
            raise PreconditionError(f"{name} may not depend on accelerations; found {accelerations}")
    if "s" in free_variables(gauge_expr):
        raise PreconditionError("the gauge term may not depend on s")

    box = config.box(sys.n, sys.interval)
    _check_identity("T", T_expr, "t", box, config)
    for i, component in enumerate(X_expr):
        _check_identity(f"X{i + 1}", component, f"x{i + 1}", box, config)

    tau = _generator(T_expr)
    xi = tuple(_generator(component) for component in X_expr)
    _validate_generator("T", T_expr, tau, box, config)
    for i, component in enumerate(X_expr):
        _validate_generator(f"X{i + 1}", component, xi[i], box, config)

    logger.debug(
        "family tau = %s, xi = %s, gauge = %s", to_source(tau), [to_source(c) for c in xi], to_source(gauge_expr)
    )
    return TransformationFamily(
        T=T_expr,
        X=X_expr,
        gauge=gauge_expr,
        tau=tau,
        xi=xi,
        sources=(T, *X, gauge),
    )


def quasi_invariance_residual(sys: LagrangianSystem, fam: TransformationFamily) -> Expr:
    """R = D_t gauge - Lt tau - Lx . xi - Lv . (D_t xi - v D_t tau) - L D_t tau."""
    tau_rate = total_time_derivative(fam.tau)
    residual = total_time_derivative(fam.gauge) - sys.Lt * fam.tau - sys.L * tau_rate
    for i in range(sys.n):
        stretch = total_time_derivative(fam.xi[i]) - coordinate("v", i + 1) * tau_rate
        residual -= sys.Lx[i] * fam.xi[i] + sys.Lv[i] * stretch
    return simplify(residual)


def check_quasi_invariance(
    sys: LagrangianSystem,
    fam: TransformationFamily,
    config: AnalysisConfig = AnalysisConfig(),
) -> InvarianceVerdict:
    residual = quasi_invariance_residual(sys, fam)
    verdict = is_identically_zero(residual, config.box(sys.n, sys.interval), config.identity)
    if verdict.is_zero:
        logger.info("quasi-invariant (%s)", "syntactic" if verdict.syntactic else f"{verdict.trials} samples")
        return InvarianceVerdict(InvarianceStatus.INVARIANT, verdict.max_abs, residual=residual)
    logger.info("not quasi-invariant: residual %s = %g at %s", to_source(residual), verdict.value, verdict.witness)
    return InvarianceVerdict(
        InvarianceStatus.NOT_INVARIANT,
        abs(verdict.value),
        witness=verdict.witness,
        residual=residual,
    )


def default_test_arcs(n: int, interval: Tuple[float, float]) -> List[PiecewiseTrajectory]:
    return [smooth_arc(n, interval, [source] * n, name=source) for source in DEFAULT_ARC_SOURCES]


def transformed_integrand(sys: LagrangianSystem, fam: TransformationFamily, s: float) -> Tuple[Expr, Expr]:
    """L(T, X, X'/T') T' with s fixed, as an integrand in (t, x, v); also returns T'."""
    fixed = {"s": s}
    T_s = simplify(substitute(fam.T, fixed))
    rate = total_time_derivative(T_s)
    bindings: Dict[str, Expr] = {"t": T_s}
    for i, component in enumerate(fam.X):
        X_s = simplify(substitute(component, fixed))
        bindings[f"x{i + 1}"] = X_s
        bindings[f"v{i + 1}"] = total_time_derivative(X_s) / rate
    return substitute(sys.L, bindings) * rate, rate


def _check_time_change(rate: Expr, arc: PiecewiseTrajectory, s: float, plan: SamplePlan) -> None:
    samples = sample_states(arc, plan)
    values = np.broadcast_to(evaluate_array(rate, samples.bindings()), samples.times.shape)
    j = int(np.argmin(values))
    if values[j] <= 0:
        raise TimeReparametrizationError(s, float(samples.times[j]), float(values[j]))


def check_classical_invariance(
    sys: LagrangianSystem,
    fam: TransformationFamily,
    s_samples: Sequence[float],
    test_arcs: Sequence[PiecewiseTrajectory],
    plan: SamplePlan = SamplePlan(),
    tol: float = 1e-8,
) -> InvarianceVerdict:
    """Finite-s invariance of the functional along smooth test arcs."""
    if not (fam.is_point_transformation and fam.is_gauge_free):
        raise PreconditionError("classical invariance needs a gauge-free transformation of (t, x) only")
    max_gap = 0.0
    for s in s_samples:
        integrand, rate = transformed_integrand(sys, fam, s)
        for arc in test_arcs:
            _check_time_change(rate, arc, s, plan)
            original = quadrature_along(arc, sys.L, plan)
            moved = quadrature_along(arc, integrand, plan)
            gap = abs(moved - original)
            logger.debug("s=%g arc=%s: J=%.12g transformed=%.12g", s, arc.name, original, moved)
            if gap > tol * (1.0 + abs(original)):
                return InvarianceVerdict(
                    InvarianceStatus.NOT_INVARIANT,
                    gap,
                    witness={"s": float(s), "J": original, "transformed": moved},
                    detail=arc.name,
                )
            max_gap = max(max_gap, gap)
    return InvarianceVerdict(InvarianceStatus.INVARIANT, max_gap)


def noether_quantity(sys: LagrangianSystem, fam: TransformationFamily) -> Expr:
    """C = (L - Lv . v) tau + Lv . xi - gauge."""
    bracket = sys.L - momentum_dot_velocity(sys)
    momentum = sp.Add(*(sys.Lv[i] * fam.xi[i] for i in range(sys.n)))
    return simplify(bracket * fam.tau + momentum - fam.gauge)


def classical_noether_quantity(sys: LagrangianSystem, fam: TransformationFamily) -> Expr:
    """Lv . dh_x/ds + (L - Lv . v) dh_t/ds at s = 0, for gauge-free point transformations."""
    if not fam.is_gauge_free:
        raise PreconditionError("the classical conserved quantity has no gauge term")
    if not fam.is_point_transformation:
        raise PreconditionError("the classical conserved quantity needs T and X free of velocities")
    time_rate = simplify(_at_identity(differentiate(fam.T, "s")))
    momentum = sp.Add(
        *(sys.Lv[i] * simplify(_at_identity(differentiate(component, "s"))) for i, component in enumerate(fam.X))
    )
    return simplify(momentum + (sys.L - momentum_dot_velocity(sys)) * time_rate)


def reduces_to_classical(
    sys: LagrangianSystem,
    fam: TransformationFamily,
    config: AnalysisConfig = AnalysisConfig(),
) -> ZeroVerdict:
    difference = noether_quantity(sys, fam) - classical_noether_quantity(sys, fam)
    return is_identically_zero(difference, config.box(sys.n, sys.interval), config.identity)
