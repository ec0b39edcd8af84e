"""Symbolic expressions over the reserved alphabet t, s, x_i, v_i, a_i, built on sympy."""

from noether_kit.expr.calculus import differentiate, total_time_derivative
from noether_kit.expr.evaluate import Point, evaluate, evaluate_array, evaluate_with_scale
from noether_kit.expr.identity import ZeroStatus, ZeroVerdict, is_identically_zero
from noether_kit.expr.parser import parse
from noether_kit.expr.printer import to_source
from noether_kit.expr.simplify import is_syntactic_zero, simplify
from noether_kit.expr.symbols import (
    ZERO,
    Expr,
    coordinate,
    free_variables,
    substitute,
    symbol,
)

__all__ = [
    "ZERO",
    "Expr",
    "Point",
    "ZeroStatus",
    "ZeroVerdict",
    "coordinate",
    "differentiate",
    "evaluate",
    "evaluate_array",
    "evaluate_with_scale",
    "free_variables",
    "is_identically_zero",
    "is_syntactic_zero",
    "parse",
    "simplify",
    "substitute",
    "symbol",
    "to_source",
    "total_time_derivative",
]
