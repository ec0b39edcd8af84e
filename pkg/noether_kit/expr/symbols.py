"""The reserved alphabet t, s, x_i, v_i, a_i as sympy symbols.

Every variable comes out of one cache and is declared real, so trees built by
the parser, by differentiation and by hand compare structurally.
"""

import re
from functools import lru_cache
from typing import Mapping, Union

import sympy as sp

Expr = sp.Expr
Number = Union[int, float]
Operand = Union[sp.Expr, Number]

ZERO = sp.S.Zero

VARIABLE_PATTERN = re.compile(r"^(t|s|[xva][1-9][0-9]*)$")

FUNCTIONS = {
    "sin": sp.sin,
    "cos": sp.cos,
    "exp": sp.exp,
    "ln": sp.log,
    "sqrt": sp.sqrt,
    "abs": sp.Abs,
}


@lru_cache(maxsize=None)
def symbol(name: str) -> sp.Symbol:
    if not VARIABLE_PATTERN.match(name):
        raise ValueError(f"'{name}' is not a reserved variable name")
    return sp.Symbol(name, real=True)


def coordinate(kind: str, index: int) -> sp.Symbol:
    """x_i, v_i or a_i with a 1-based index."""
    return symbol(f"{kind}{index}")


def as_expr(value: Operand) -> Expr:
    if isinstance(value, sp.Basic):
        return value
    if isinstance(value, float) and value.is_integer():
        return sp.Integer(int(value))
    return sp.sympify(value)


def free_variables(e: Operand) -> frozenset:
    return frozenset(sym.name for sym in as_expr(e).free_symbols)


def substitute(e: Operand, bindings: Mapping[str, Operand]) -> Expr:
    """Replace variables simultaneously; ``{"x1": v1, "v1": x1}`` swaps them."""
    mapping = {symbol(name): as_expr(value) for name, value in bindings.items()}
    return as_expr(e).subs(mapping, simultaneous=True)


def variable_index(name: str) -> int:
    """1-based coordinate index of x_i / v_i / a_i; 0 for t and s."""
    return int(name[1:]) if name[0] in "xva" else 0
