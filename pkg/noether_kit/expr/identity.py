"""Randomized zero-identity testing with reproducible seeds."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

import numpy as np

from noether_kit.config import IdentityTestConfig, SamplingBox
from noether_kit.errors import EvaluationDomainError, PreconditionError, RetryCapExceededError
from noether_kit.expr.evaluate import evaluate_with_scale
from noether_kit.expr.simplify import simplify
from noether_kit.expr.symbols import Operand, free_variables

logger = logging.getLogger(__name__)


class ZeroStatus(str, Enum):
    ZERO = "zero"
    NONZERO = "nonzero"


@dataclass(frozen=True)
class ZeroVerdict:
    status: ZeroStatus
    syntactic: bool = False
    witness: Optional[Dict[str, float]] = None
    value: Optional[float] = None
    max_abs: float = 0.0
    trials: int = 0

    @property
    def is_zero(self) -> bool:
        return self.status is ZeroStatus.ZERO


def is_identically_zero(
    e: Operand,
    box: SamplingBox,
    config: IdentityTestConfig = IdentityTestConfig(),
) -> ZeroVerdict:
    """Decide e == 0 on the box: syntactically if possible, else by sampling.

    A sample counts as nonzero when |value| > tol * (1 + scale), with scale the
    largest magnitude among the value and its top-level terms. Samples that hit a
    domain error are redrawn, up to ``config.retry_cap`` draws in total.
    """
    reduced = simplify(e)
    if reduced == 0:
        return ZeroVerdict(ZeroStatus.ZERO, syntactic=True)

    names = sorted(free_variables(reduced))
    limits = box.as_dict()
    missing = [name for name in names if name not in limits]
    if missing:
        raise PreconditionError(f"sampling box has no bounds for {missing}")

    if not names:
        value, scale = evaluate_with_scale(reduced, {})
        if abs(value) > config.tol * (1.0 + scale):
            return ZeroVerdict(ZeroStatus.NONZERO, witness={}, value=value, max_abs=abs(value), trials=1)
        return ZeroVerdict(ZeroStatus.ZERO, max_abs=abs(value), trials=1)

    rng = np.random.default_rng(config.seed)
    logger.debug("identity test on %s over %s, seed %d", names, limits, config.seed)
    accepted = attempts = domain_errors = 0
    max_abs = 0.0
    while accepted < config.trials:
        if attempts >= config.retry_cap:
            raise RetryCapExceededError(attempts, domain_errors)
        attempts += 1
        point = box.sample(rng, names)
        try:
            value, scale = evaluate_with_scale(reduced, point)
        except EvaluationDomainError:
            domain_errors += 1
            if domain_errors == config.retry_cap // 2:
                logger.warning("half of the retry budget spent on domain errors for %s", reduced)
            continue
        accepted += 1
        max_abs = max(max_abs, abs(value))
        if abs(value) > config.tol * (1.0 + scale):
            return ZeroVerdict(
                ZeroStatus.NONZERO, witness=point, value=value, max_abs=max_abs, trials=accepted
            )
    return ZeroVerdict(ZeroStatus.ZERO, max_abs=max_abs, trials=accepted)
