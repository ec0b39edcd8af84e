"""Exception hierarchy for noether-kit.

Every error raised on purpose by the package derives from NoetherKitError and
keeps the data that caused it as attributes, so callers (the CLI in
particular) can report it without parsing messages.
"""

from typing import Any, Dict, Optional, Sequence


class NoetherKitError(Exception):
    """Base class for all noether-kit errors."""


class ExprSyntaxError(NoetherKitError):
    """Expression source does not match the grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(NoetherKitError):
    """Identifier outside the reserved alphabet for the problem dimension."""

    def __init__(self, token: str, offset: int, dimension: Optional[int] = None):
        detail = f" for dimension {dimension}" if dimension is not None else ""
        super().__init__(f"unknown identifier '{token}'{detail} at offset {offset}")
        self.token = token
        self.offset = offset
        self.dimension = dimension


class UnassignedVariableError(NoetherKitError):
    def __init__(self, name: str):
        super().__init__(f"variable '{name}' has no value at this point")
        self.name = name


class EvaluationDomainError(NoetherKitError):
    """Evaluation produced a nonfinite value (ln of nonpositive, 1/0, ...)."""

    def __init__(self, detail: str, point: Optional[Dict[str, Any]] = None):
        where = f" at {point}" if point else ""
        super().__init__(f"domain error: {detail}{where}")
        self.detail = detail
        self.point = point


class RetryCapExceededError(NoetherKitError):
    def __init__(self, attempts: int, domain_errors: int):
        super().__init__(
            f"gave up after {attempts} samples: {domain_errors} hit domain errors; "
            "shrink the sampling box away from singular loci"
        )
        self.attempts = attempts
        self.domain_errors = domain_errors


class DerivativeValidationError(NoetherKitError):
    """Symbolic partial disagrees with its central finite difference."""

    def __init__(
        self,
        expression: str,
        variable: str,
        point: Dict[str, float],
        symbolic: float,
        numeric: float,
    ):
        super().__init__(
            f"d/d{variable} of {expression} is {symbolic!r} symbolically but "
            f"{numeric!r} by finite differences at {point}"
        )
        self.expression = expression
        self.variable = variable
        self.point = point
        self.symbolic = symbolic
        self.numeric = numeric


class IdentityViolationError(NoetherKitError):
    """A transformation component does not reduce to the identity at s = 0."""

    def __init__(self, component: str, witness: Dict[str, float], value: float):
        super().__init__(
            f"{component} does not reduce to the identity at s=0: "
            f"residual {value!r} at {witness}"
        )
        self.component = component
        self.witness = witness
        self.value = value


class PreconditionError(NoetherKitError):
    pass


class TimeReparametrizationError(NoetherKitError):
    """dT/dt <= 0 along a test arc: not a valid change of time."""

    def __init__(self, s: float, t: float, rate: float):
        super().__init__(f"dT/dt = {rate!r} <= 0 at t={t!r} for s={s!r}")
        self.s = s
        self.t = t
        self.rate = rate


class TrajectoryError(NoetherKitError):
    pass


class ContinuityError(TrajectoryError):
    def __init__(self, coordinate: int, breakpoint: float, jump: float):
        super().__init__(
            f"coordinate x{coordinate} jumps by {jump!r} at breakpoint {breakpoint!r}"
        )
        self.coordinate = coordinate
        self.breakpoint = breakpoint
        self.jump = jump


class BreakpointProximityError(TrajectoryError):
    """Velocity requested on the null set around a corner."""

    def __init__(self, t: float, breakpoint: float):
        super().__init__(
            f"velocity is undefined at t={t!r}: too close to breakpoint {breakpoint!r}"
        )
        self.t = t
        self.breakpoint = breakpoint


class ProblemFileError(NoetherKitError):
    pass


class ExpectationMismatchError(NoetherKitError):
    def __init__(self, diff: Sequence[str]):
        super().__init__("corpus expectations not met:\n" + "\n".join(diff))
        self.diff = list(diff)
