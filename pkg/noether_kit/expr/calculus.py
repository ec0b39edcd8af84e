"""Partial and total time derivatives."""

import sympy as sp

from noether_kit.errors import PreconditionError
from noether_kit.expr.simplify import simplify
from noether_kit.expr.symbols import (
    ZERO,
    Expr,
    Operand,
    as_expr,
    coordinate,
    free_variables,
    symbol,
    variable_index,
)


def differentiate(e: Operand, wrt: str) -> Expr:
    """Exact symbolic partial derivative of e with respect to a reserved variable."""
    target = symbol(wrt)
    e = as_expr(e)
    if target not in e.free_symbols:
        return ZERO
    # sign(u) as u/|u| keeps the kink at u = 0 a domain error
    slope = sp.diff(e, target).replace(sp.sign, lambda u: u / sp.Abs(u))
    return simplify(slope)


def total_time_derivative(e: Operand) -> Expr:
    """d/dt along an arc: e_t + sum e_{x_i} v_i + sum e_{v_i} a_i."""
    names = free_variables(e)
    forbidden = sorted(n for n in names if n == "s" or n.startswith("a"))
    if forbidden:
        raise PreconditionError(
            f"total time derivative is defined on (t, x, v) expressions; found {forbidden}"
        )
    terms = [differentiate(e, "t")]
    for name in sorted(names, key=lambda n: (n[0], variable_index(n))):
        if name.startswith("x"):
            terms.append(differentiate(e, name) * coordinate("v", variable_index(name)))
        elif name.startswith("v"):
            terms.append(differentiate(e, name) * coordinate("a", variable_index(name)))
    return simplify(sp.Add(*terms))
