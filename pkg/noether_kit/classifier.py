"""Necessary conditions along a trajectory and the conservation check.

Euler-Lagrange and DuBois-Reymond are tested in integrated form: the sampled
field r(t) = p(t) - int_a^t q must be constant, and the constant is fitted as
the componentwise median. Weierstrass is tested against a probe set of
velocities. All checks read the trajectory only at segment-interior samples.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from noether_kit.config import AnalysisConfig, ProbeConfig, SamplePlan
from noether_kit.errors import PreconditionError
from noether_kit.expr import Expr, Point, evaluate_array, free_variables, to_source
from noether_kit.symmetry import (
    InvarianceVerdict,
    TransformationFamily,
    check_quasi_invariance,
    noether_quantity,
)
from noether_kit.trajectory import (
    PiecewiseTrajectory,
    TrajectorySamples,
    boundary_values,
    running_integral,
    sample_states,
)
from noether_kit.variational import (
    LagrangianSystem,
    functional_value,
    hamiltonian_like,
    weierstrass_excess_many,
)

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-9


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"


@dataclass(frozen=True)
class Witness:
    t: float
    detail: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ConditionVerdict:
    status: Status
    residual: float
    witness: Optional[Witness] = None
    constant: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError(f"residual must be non-negative, got {self.residual}")
        if self.status is Status.FAIL and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS


@dataclass(frozen=True)
class ConstantFit:
    constant: np.ndarray
    residual: float
    worst: Tuple[int, int]
    passed: bool


def fit_constant(field_values: np.ndarray, tol: float) -> ConstantFit:
    """Fit r (n, N) by a constant vector; pass iff max deviation <= tol * (1 + |c|)."""
    r = np.atleast_2d(np.asarray(field_values, dtype=float))
    c = np.median(r, axis=1)
    deviation = np.abs(r - c[:, None])
    worst = np.unravel_index(int(np.argmax(deviation)), deviation.shape)
    residual = float(deviation[worst])
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    return ConstantFit(c, residual, (int(worst[0]), int(worst[1])), residual <= tol * (1.0 + scale))


def _values(e: Expr, samples: TrajectorySamples) -> np.ndarray:
    return np.broadcast_to(evaluate_array(e, samples.bindings()), samples.times.shape).astype(float)


def _integrated_verdict(
    name: str,
    traj: PiecewiseTrajectory,
    samples: TrajectorySamples,
    bodies: Sequence[Expr],
    sources: Sequence[Expr],
    plan: SamplePlan,
    tol: float,
) -> ConditionVerdict:
    rows = []
    for body, source in zip(bodies, sources, strict=True):
        accumulated = running_integral(traj, source, plan)(samples.times)
        rows.append(_values(body, samples) - accumulated)
    fit = fit_constant(np.vstack(rows), tol)
    logger.debug("%s: fitted constant %s, residual %g", name, fit.constant, fit.residual)
    component, j = fit.worst
    constant = tuple(float(c) for c in fit.constant)
    if fit.passed:
        return ConditionVerdict(Status.PASS, fit.residual, constant=constant)
    witness = Witness(
        float(samples.times[j]),
        {
            "component": component + 1,
            "value": float(rows[component][j]),
            "constant": constant[component],
            "segment": int(samples.segment[j]),
        },
    )
    return ConditionVerdict(Status.FAIL, fit.residual, witness, constant)


def _require_dimension(sys: LagrangianSystem, traj: PiecewiseTrajectory) -> None:
    if sys.n != traj.n:
        raise PreconditionError(f"system has n={sys.n} but trajectory has n={traj.n}")


def check_euler_lagrange(
    sys: LagrangianSystem,
    traj: PiecewiseTrajectory,
    plan: SamplePlan = SamplePlan(),
    tol: float = 1e-6,
) -> ConditionVerdict:
    """Lv(t) - int_a^t Lx must be constant."""
    _require_dimension(sys, traj)
    samples = sample_states(traj, plan)
    verdict = _integrated_verdict("euler-lagrange", traj, samples, sys.Lv, sys.Lx, plan, tol)
    logger.info("euler-lagrange %s (residual %g)", verdict.status.value, verdict.residual)
    return verdict


def check_dubois_reymond(
    sys: LagrangianSystem,
    traj: PiecewiseTrajectory,
    plan: SamplePlan = SamplePlan(),
    tol: float = 1e-6,
) -> ConditionVerdict:
    """(L - Lv . v)(t) - int_a^t Lt must be constant."""
    _require_dimension(sys, traj)
    samples = sample_states(traj, plan)
    verdict = _integrated_verdict("dubois-reymond", traj, samples, [hamiltonian_like(sys)], [sys.Lt], plan, tol)
    logger.info("dubois-reymond %s (residual %g)", verdict.status.value, verdict.residual)
    return verdict


def probe_velocities(n: int, bound: float, probes: ProbeConfig) -> np.ndarray:
    """Uniform grid on [-bound, bound]^n plus seeded random probes, shape (k, n)."""
    per_axis = probes.grid
    if per_axis**n > probes.max_grid_points:
        per_axis = max(2, int(probes.max_grid_points ** (1.0 / n)))
        logger.warning("probe grid shrunk to %d points per axis for n=%d", per_axis, n)
    axis = np.linspace(-bound, bound, per_axis)
    grid = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    rng = np.random.default_rng(probes.seed)
    random = rng.uniform(-bound, bound, size=(probes.random, n))
    return np.vstack([grid, random])


def check_weierstrass(
    sys: LagrangianSystem,
    traj: PiecewiseTrajectory,
    plan: SamplePlan = SamplePlan(),
    tol: float = 1e-6,
    probes: ProbeConfig = ProbeConfig(),
) -> ConditionVerdict:
    """Excess E(t, x, v, w) >= -tol at every sample and probe."""
    _require_dimension(sys, traj)
    samples = sample_states(traj, plan)
    bound = probes.resolved_bound(traj.lipschitz_bound)
    velocities = probe_velocities(sys.n, bound, probes)
    logger.debug("weierstrass: %d probes in [-%g, %g]^%d", len(velocities), bound, bound, sys.n)

    lowest = np.inf
    worst: Optional[Tuple[int, int, float]] = None
    for j, t in enumerate(samples.times):
        base = Point(float(t), tuple(samples.x[:, j]), tuple(samples.v[:, j]))
        excess = weierstrass_excess_many(sys, base, velocities)
        k = int(np.argmin(excess))
        if excess[k] < lowest:
            lowest = float(excess[k])
            worst = (j, k, lowest)
    residual = max(0.0, -lowest)
    if lowest >= -tol:
        logger.info("weierstrass pass (min excess %g)", lowest)
        return ConditionVerdict(Status.PASS, residual)
    j, k, value = worst
    witness = Witness(
        float(samples.times[j]),
        {
            "probe": [float(w) for w in velocities[k]],
            "excess": value,
            "velocity": [float(v) for v in samples.v[:, j]],
        },
    )
    logger.info("weierstrass fail: excess %g at t=%g, w=%s", value, witness.t, witness.detail["probe"])
    return ConditionVerdict(Status.FAIL, residual, witness)


@dataclass(frozen=True)
class ConservationResult:
    deviation: float
    mean: float
    values: np.ndarray
    times: np.ndarray
    conserved: bool

    @property
    def status(self) -> str:
        return "conserved" if self.conserved else "not_conserved"


def verify_conservation(
    quantity: Expr,
    traj: PiecewiseTrajectory,
    plan: SamplePlan = SamplePlan(),
    tol: float = 1e-6,
) -> ConservationResult:
    """Spread of the quantity over all interior samples, across every segment."""
    bad = sorted(name for name in free_variables(quantity) if name == "s" or name.startswith("a"))
    if bad:
        raise PreconditionError(f"a conserved quantity lives on (t, x, v); found {bad}")
    samples = sample_states(traj, plan)
    values = _values(quantity, samples)
    deviation = float(np.max(values) - np.min(values))
    scale = float(np.max(np.abs(values)))
    conserved = deviation <= tol * (1.0 + scale)
    logger.info("conservation deviation %g (%s)", deviation, "conserved" if conserved else "not conserved")
    return ConservationResult(deviation, float(np.mean(values)), values, samples.times, conserved)


@dataclass(frozen=True)
class BoundaryCheck:
    alpha: Tuple[float, ...]
    beta: Tuple[float, ...]
    start: Tuple[float, ...]
    end: Tuple[float, ...]

    @property
    def satisfied(self) -> bool:
        expected = np.concatenate([self.alpha, self.beta])
        actual = np.concatenate([self.start, self.end])
        return bool(np.all(np.abs(actual - expected) <= BOUNDARY_TOL * (1.0 + np.abs(expected))))


def check_boundary(traj: PiecewiseTrajectory, alpha: Sequence[float], beta: Sequence[float]) -> BoundaryCheck:
    start, end = boundary_values(traj)
    return BoundaryCheck(
        tuple(float(a) for a in alpha),
        tuple(float(b) for b in beta),
        tuple(float(x) for x in start),
        tuple(float(x) for x in end),
    )


@dataclass(frozen=True)
class AnalysisReport:
    invariance: InvarianceVerdict
    noether: Expr
    euler_lagrange: ConditionVerdict
    dubois_reymond: ConditionVerdict
    weierstrass: ConditionVerdict
    conservation: ConservationResult
    functional: Optional[float] = None
    boundary: Optional[BoundaryCheck] = None
    findings: Tuple[str, ...] = ()
    trajectory: str = ""

    @property
    def pontryagin_class(self) -> bool:
        return self.euler_lagrange.passed and self.weierstrass.passed

    @property
    def theorem4_class(self) -> bool:
        return self.euler_lagrange.passed and self.dubois_reymond.passed


def analyze(
    sys: LagrangianSystem,
    fam: TransformationFamily,
    traj: PiecewiseTrajectory,
    config: AnalysisConfig = AnalysisConfig(),
    boundary: Optional[Tuple[Sequence[float], Sequence[float]]] = None,
) -> AnalysisReport:
    _require_dimension(sys, traj)
    plan = config.plan
    invariance = check_quasi_invariance(sys, fam, config)
    quantity = noether_quantity(sys, fam)

    with ThreadPoolExecutor(max_workers=3, thread_name_prefix="noether-kit") as pool:
        el = pool.submit(check_euler_lagrange, sys, traj, plan, config.tol)
        dbr = pool.submit(check_dubois_reymond, sys, traj, plan, config.tol)
        weierstrass = pool.submit(check_weierstrass, sys, traj, plan, config.tol, config.probes)
        verdicts = el.result(), dbr.result(), weierstrass.result()

    conservation = verify_conservation(quantity, traj, plan, config.conservation_tol)
    findings: List[str] = []
    if invariance.is_invariant and verdicts[0].passed and verdicts[1].passed and not conservation.conserved:
        finding = (
            f"trajectory '{traj.name}' is an invariant Euler-Lagrange and DuBois-Reymond extremal "
            f"but {to_source(quantity)} deviates by {conservation.deviation:g}"
        )
        logger.error(finding)
        findings.append(finding)

    return AnalysisReport(
        invariance=invariance,
        noether=quantity,
        euler_lagrange=verdicts[0],
        dubois_reymond=verdicts[1],
        weierstrass=verdicts[2],
        conservation=conservation,
        functional=functional_value(sys, traj, plan),
        boundary=check_boundary(traj, *boundary) if boundary is not None else None,
        findings=tuple(findings),
        trajectory=traj.name,
    )
