"""Numeric evaluation of expressions, scalar or vectorized over numpy arrays.

Expressions are compiled once with ``sympy.lambdify`` against numpy and the
compiled function is cached per expression.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

import numpy as np
import sympy as sp

from noether_kit.errors import EvaluationDomainError, UnassignedVariableError
from noether_kit.expr.symbols import Expr, Operand, as_expr, free_variables, symbol

ArrayLike = Union[float, np.ndarray]

_NONFINITE = (sp.S.ComplexInfinity, sp.S.Infinity, sp.S.NegativeInfinity, sp.S.NaN)


@dataclass(frozen=True)
class Point:
    """Argument bundle for evaluation at (t, x, v[, a][, s])."""

    t: float
    x: Tuple[float, ...]
    v: Tuple[float, ...]
    a: Optional[Tuple[float, ...]] = None
    s: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(c) for c in self.x))
        object.__setattr__(self, "v", tuple(float(c) for c in self.v))
        if len(self.x) != len(self.v):
            raise ValueError(f"x has length {len(self.x)} but v has length {len(self.v)}")
        if self.a is not None:
            object.__setattr__(self, "a", tuple(float(c) for c in self.a))
            if len(self.a) != len(self.x):
                raise ValueError(f"a has length {len(self.a)} but x has length {len(self.x)}")

    @property
    def dimension(self) -> int:
        return len(self.x)

    def bindings(self) -> Dict[str, float]:
        values = {"t": float(self.t)}
        for i, (xi, vi) in enumerate(zip(self.x, self.v, strict=True), start=1):
            values[f"x{i}"] = xi
            values[f"v{i}"] = vi
        if self.a is not None:
            for i, ai in enumerate(self.a, start=1):
                values[f"a{i}"] = ai
        if self.s is not None:
            values["s"] = float(self.s)
        return values


Bindings = Union[Point, Mapping[str, ArrayLike]]


def _as_mapping(point: Bindings) -> Mapping[str, ArrayLike]:
    return point.bindings() if isinstance(point, Point) else point


@lru_cache(maxsize=4096)
def _compile(e: Expr) -> Tuple[Tuple[str, ...], Callable]:
    names = tuple(sorted(free_variables(e)))
    return names, sp.lambdify([symbol(name) for name in names], e, modules="numpy")


def _offending_point(env: Mapping[str, ArrayLike], finite: np.ndarray) -> Dict[str, float]:
    index = None if finite.ndim == 0 else tuple(np.argwhere(~finite)[0])
    point = {}
    for name, value in env.items():
        array = np.asarray(value, dtype=float)
        if index is not None and array.ndim == len(index):
            point[name] = float(array[index])
        elif array.ndim == 0:
            point[name] = float(array)
    return point


def evaluate_array(e: Operand, bindings: Bindings) -> np.ndarray:
    """Evaluate over broadcast numpy arrays; any nonfinite or complex entry is a domain error."""
    e = as_expr(e)
    env = _as_mapping(bindings)
    if e.has(*_NONFINITE):
        raise EvaluationDomainError("nonfinite constant", _offending_point(env, np.asarray(False)))
    names, compiled = _compile(e)
    for name in names:
        if name not in env:
            raise UnassignedVariableError(name)
    arguments = [np.asarray(env[name], dtype=float) for name in names]
    with np.errstate(all="ignore"):
        value = np.asarray(compiled(*arguments))
    if np.iscomplexobj(value):
        real = value.imag == 0
        if not np.all(real):
            raise EvaluationDomainError("value outside the reals", _offending_point(env, real))
        value = value.real
    value = value.astype(float)
    finite = np.isfinite(value)
    if not np.all(finite):
        raise EvaluationDomainError("nonfinite value", _offending_point(env, finite))
    return value


def evaluate(e: Operand, point: Bindings) -> float:
    return float(evaluate_array(e, point))


def evaluate_with_scale(e: Operand, point: Bindings) -> Tuple[float, float]:
    """Value of e plus the largest magnitude among it and its top-level terms."""
    e = as_expr(e)
    value = evaluate(e, point)
    scale = abs(value)
    terms = sp.Add.make_args(e)
    if len(terms) > 1:
        scale = max(scale, *(abs(evaluate(term, point)) for term in terms))
    return value, scale
