"""Recursive-descent parser for polynomial and rational-function expressions.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | base (('^' | '**') signed-int)?
    base   := number | identifier | '(' expr ')'

The parser is generic over a small algebra interface so the same front end
builds :class:`LaurentPoly` values (torus coordinates) and :class:`RatFun`
values (parameter field).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .laurent import LaurentPoly
from .mpoly import PolyRing
from .ratfun import RatFun

MAX_ABS_EXPONENT = 4096

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


class ParseError(ValueError):
    """Syntax error, unknown variable, or exponent overflow, with a character position."""

    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", n))
    return toks


@dataclass
class Algebra:
    const: Callable[[Fraction], object]
    var: Callable[[str], object]
    div: Callable[[object, object], object]
    pow: Callable[[object, int], object]


class _Parser:
    def __init__(self, text: str, alg: Algebra):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.alg = alg

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok.pos)

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected token {self.peek().value!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek().value in ("+", "-") and self.peek().kind == "op":
            op = self.take().value
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek().kind == "op" and self.peek().value in ("*", "/"):
            tok = self.take()
            w = self.factor()
            if tok.value == "*":
                v = v * w
            else:
                try:
                    v = self.alg.div(v, w)
                except (ValueError, ZeroDivisionError) as exc:
                    self.error(str(exc), tok)
        return v

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value in ("+", "-"):
            self.take()
            v = self.factor()
            return -v if tok.value == "-" else v
        v = self.base()
        tok = self.peek()
        if tok.kind == "op" and tok.value in ("^", "**"):
            self.take()
            sign = 1
            while self.peek().kind == "op" and self.peek().value in ("+", "-"):
                if self.take().value == "-":
                    sign = -sign
            num = self.peek()
            if num.kind != "num" or "." in num.value:
                self.error("expected integer exponent")
            self.take()
            e = sign * int(num.value)
            if abs(e) > MAX_ABS_EXPONENT:
                self.error(f"exponent {e} exceeds limit {MAX_ABS_EXPONENT}", num)
            try:
                v = self.alg.pow(v, e)
            except (ValueError, ZeroDivisionError) as exc:
                self.error(str(exc), tok)
        return v

    def base(self):
        tok = self.take()
        if tok.kind == "num":
            return self.alg.const(Fraction(tok.value))
        if tok.kind == "id":
            try:
                return self.alg.var(tok.value)
            except KeyError:
                self.error(f"unknown variable {tok.value!r}", tok)
        if tok.kind == "op" and tok.value == "(":
            v = self.expr()
            if self.peek().value != ")":
                self.error("expected ')'")
            self.take()
            return v
        self.error(f"unexpected token {tok.value!r}" if tok.kind != "end" else "unexpected end of input", tok)


def parse_laurent(text: str, vars: Sequence[str]) -> LaurentPoly:
    """Parse a Laurent polynomial; division is allowed by monomials only."""
    vars = tuple(vars)
    index = {v: i for i, v in enumerate(vars)}

    def var(name):
        if name not in index:
            raise KeyError(name)
        return LaurentPoly.gen(vars, index[name])

    alg = Algebra(
        const=lambda c: LaurentPoly.constant(vars, c),
        var=var,
        div=lambda a, b: a / b,
        pow=lambda a, e: a**e,
    )
    return _Parser(text, alg).parse()


def parse_ratfun(text: str, ring: PolyRing | Sequence[str]) -> RatFun:
    """Parse an element of the parameter field Q(ring variables)."""
    if not isinstance(ring, PolyRing):
        ring = PolyRing(tuple(ring))

    def var(name):
        if name not in ring.index:
            raise KeyError(name)
        return RatFun.gen(ring, name)

    def div(a, b):
        if b.is_zero():
            raise ZeroDivisionError("division by zero")
        return a / b

    def pw(a, e):
        if e < 0 and a.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return a**e

    alg = Algebra(const=lambda c: RatFun.constant(ring, c), var=var, div=div, pow=pw)
    return _Parser(text, alg).parse()
