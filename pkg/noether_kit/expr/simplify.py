"""Semantics-preserving simplification on top of sympy.

``simplify`` expands products and integer powers and collects like terms with
``sympy.expand``; a rational result that does not vanish that way gets one
``sympy.cancel`` over a common denominator. Expansions that would exceed
``MAX_TERMS`` terms leave the expression as it was.

This is not a canonical form for trigonometric identities; the randomized
identity test covers what it misses.
"""

import sympy as sp

from noether_kit.expr.symbols import ZERO, Expr, Operand, as_expr

MAX_TERMS = 512


def _has_denominator(e: Expr) -> bool:
    return any(power.exp.is_negative for power in e.atoms(sp.Pow))


def simplify(e: Operand) -> Expr:
    e = as_expr(e)
    expanded = sp.expand(e)
    if len(sp.Add.make_args(expanded)) > MAX_TERMS:
        return e
    if expanded != 0 and _has_denominator(expanded) and sp.cancel(expanded) == 0:
        return ZERO
    return expanded


def is_syntactic_zero(e: Operand) -> bool:
    return simplify(e) == 0
