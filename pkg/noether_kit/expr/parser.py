"""Recursive-descent parser for the expression language.

Grammar (``^`` binds tighter than unary minus and is right-associative)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | ident | func '(' expr ')' | '(' expr ')'
    func   := 'sin' | 'cos' | 'exp' | 'ln' | 'sqrt' | 'abs'
    ident  := 't' | 's' | ('x'|'v'|'a') digits

Each rule returns a sympy expression. Numbers become exact rationals, so
``0.1`` is 1/10 and constant subtrees fold without round-off; binary minus
is sympy subtraction, an ``Add`` with the operand times -1.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import sympy as sp

from noether_kit.errors import ExprSyntaxError, UnknownIdentifierError
from noether_kit.expr.symbols import FUNCTIONS, Expr, symbol

_TOKEN = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_COORDINATE = re.compile(r"^([xva])([1-9][0-9]*)$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(source):
        match = _TOKEN.match(source, position)
        if match is None:
            offset = len(source[:position].encode("utf-8"))
            raise ExprSyntaxError(f"unexpected character {source[position]!r}", offset)
        kind = match.lastgroup
        if kind != "space":
            tokens.append(Token(kind, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


def number(text: str) -> sp.Rational:
    value = Fraction(text)
    return sp.Rational(value.numerator, value.denominator)


class _Parser:
    def __init__(self, source: str, dimension: int):
        self.tokens = tokenize(source)
        self.index = 0
        self.dimension = dimension

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, text: str) -> Optional[Token]:
        if self.current.kind == "op" and self.current.text == text:
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        token = self.accept(text)
        if token is None:
            found = self.current.text or "end of input"
            raise ExprSyntaxError(f"expected '{text}' but found '{found}'", self.current.offset)
        return token

    def parse(self) -> Expr:
        result = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"unexpected '{self.current.text}'", self.current.offset)
        return result

    def expr(self) -> Expr:
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> Expr:
        result = self.unary()
        while True:
            if self.accept("*"):
                result = result * self.unary()
            elif self.accept("/"):
                result = result / self.unary()
            else:
                return result

    def unary(self) -> Expr:
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return base ** self.unary()
        return base

    def atom(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self.advance()
            return number(token.text)
        if token.kind == "ident":
            self.advance()
            if token.text in FUNCTIONS:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return FUNCTIONS[token.text](argument)
            return self.identifier(token)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        found = token.text or "end of input"
        raise ExprSyntaxError(f"unexpected '{found}'", token.offset)

    def identifier(self, token: Token) -> sp.Symbol:
        if token.text in ("t", "s"):
            return symbol(token.text)
        match = _COORDINATE.match(token.text)
        if match and int(match.group(2)) <= self.dimension:
            return symbol(token.text)
        raise UnknownIdentifierError(token.text, token.offset, self.dimension)


def parse(source: str, dimension: int) -> Expr:
    """Parse ``source`` over the reserved alphabet of an n-dimensional problem."""
    if dimension < 1:
        raise ValueError(f"dimension must be >= 1, got {dimension}")
    if not source.isascii():
        bad = next(i for i, ch in enumerate(source) if not ch.isascii())
        raise ExprSyntaxError(
            f"unexpected character {source[bad]!r}", len(source[:bad].encode("utf-8"))
        )
    return _Parser(source, dimension).parse()
