"""Source printer; its output always re-parses."""

from sympy.printing.str import StrPrinter

from noether_kit.expr.symbols import Operand, as_expr


def format_number(value: float) -> str:
    if value == 0:
        return "0"
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


class SourcePrinter(StrPrinter):
    """sympy's string form, spelled with the parser's function names."""

    def _print_Float(self, expr):
        return format_number(float(expr))

    def _print_log(self, expr):
        return f"ln({self._print(expr.args[0])})"

    def _print_Abs(self, expr):
        return f"abs({self._print(expr.args[0])})"

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _no_source(self, expr):
        raise ValueError(f"{expr} has no real finite source form")

    _print_ComplexInfinity = _no_source
    _print_Infinity = _no_source
    _print_NegativeInfinity = _no_source
    _print_NaN = _no_source
    _print_ImaginaryUnit = _no_source


def to_source(e: Operand) -> str:
    return SourcePrinter().doprint(as_expr(e)).replace("**", "^")
