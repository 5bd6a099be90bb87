"""The parameter field K = Q(s, nu) (optionally with an extra variable delta).

A :class:`RatFun` stores an integer numerator and denominator polynomial
in canonical form: coprime, the pair has integer content 1, and the
denominator's leading coefficient (graded lex) is positive.  Two equal
field elements therefore have identical representations, so equality
and hashing are structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import Sequence

from .mpoly import (
    MPoly,
    PolyRing,
    _add,
    _clear,
    _content,
    _evaluate,
    _evaluate_mod,
    _exquo,
    _gcd_z,
    _homogenize,
    _mul,
    _neg,
    _pow,
    _shift,
    _sub,
    format_poly,
)

_ONE = {0: 1}


def _is_int_const(d: dict) -> bool:
    return len(d) == 1 and 0 in d


def _canon(num: dict, den: dict) -> tuple[dict, dict]:
    """Fix integer content and the sign of a coprime pair."""
    if not num:
        return {}, _ONE
    g = igcd(_content(num), _content(den))
    if den[max(den)] < 0:
        g = -g
    if g != 1:
        num = {m: c // g for m, c in num.items()}
        den = {m: c // g for m, c in den.items()}
    return num, den


def _reduce(num: dict, den: dict, ring: PolyRing) -> tuple[dict, dict]:
    if not num:
        return {}, _ONE
    if not (_is_int_const(den) or _is_int_const(num)):
        g = _gcd_z(num, den, ring)
        if not (len(g) == 1 and 0 in g):
            num = _exquo(num, g, ring)
            den = _exquo(den, g, ring)
    return _canon(num, den)


def _exq(a: dict, b: dict, ring: PolyRing) -> dict:
    if _is_int_const(b) and b[0] == 1:
        return a
    return _exquo(a, b, ring)


def _g(a: dict, b: dict, ring: PolyRing) -> dict:
    """gcd with cheap exits for constants and equal inputs."""
    if _is_int_const(a) or _is_int_const(b):
        return _ONE
    if a == b:
        return a
    g = _gcd_z(a, b, ring)
    if _is_int_const(g):
        return _ONE
    return g


class RatFun:
    """Immutable reduced rational function over Q."""

    __slots__ = ("ring", "n", "d", "_hash")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        ring = num.ring
        n, dn = _clear(num._d)
        if den is None:
            d = {0: dn}
        else:
            if den.ring is not ring:
                raise ValueError("ring mismatch")
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            d, dd = _clear(den._d)
            # n/dn over d/dd
            n = {m: c * dd for m, c in n.items()}
            d = {m: c * dn for m, c in d.items()}
        self.ring = ring
        self.n, self.d = _reduce(n, d, ring)
        self._hash = None

    @classmethod
    def _raw(cls, ring: PolyRing, n: dict, d: dict) -> "RatFun":
        r = object.__new__(cls)
        r.ring = ring
        r.n = n
        r.d = d
        r._hash = None
        return r

    @classmethod
    def _make(cls, ring: PolyRing, n: dict, d: dict) -> "RatFun":
        n, d = _reduce(n, d, ring)
        return cls._raw(ring, n, d)

    @classmethod
    def constant(cls, ring: PolyRing, c) -> "RatFun":
        c = Fraction(c)
        if not c:
            return cls._raw(ring, {}, _ONE)
        return cls._raw(ring, {0: c.numerator}, {0: c.denominator})

    @classmethod
    def gen(cls, ring: PolyRing, name: str | int) -> "RatFun":
        i = ring.index[name] if isinstance(name, str) else name
        return cls._raw(ring, {ring.gens[i]: 1}, _ONE)

    @classmethod
    def zero(cls, ring: PolyRing) -> "RatFun":
        return cls._raw(ring, {}, _ONE)

    @classmethod
    def one(cls, ring: PolyRing) -> "RatFun":
        return cls._raw(ring, _ONE, _ONE)

    # -- accessors ---------------------------------------------------------

    @property
    def numerator(self) -> MPoly:
        return MPoly._raw(self.ring, self.n)

    @property
    def denominator(self) -> MPoly:
        return MPoly._raw(self.ring, self.d)

    def is_zero(self) -> bool:
        return not self.n

    def is_one(self) -> bool:
        return self.n == _ONE and self.d == _ONE

    def is_constant(self) -> bool:
        return _is_int_const(self.d) and (not self.n or _is_int_const(self.n))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(self.n.get(0, 0), self.d[0])

    def complexity(self) -> tuple[int, int]:
        """Pivot cost: (total degree of num + den, term count)."""
        r = self.ring
        dn = max((r.total_degree(m) for m in self.n), default=0)
        dd = max(r.total_degree(m) for m in self.d)
        return dn + dd, len(self.n) + len(self.d)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, MPoly):
            return RatFun(other)
        if isinstance(other, (int, Fraction)):
            return RatFun.constant(self.ring, other)
        raise TypeError(f"cannot combine RatFun with {type(other).__name__}")

    def _addsub(self, other: "RatFun", sign: int) -> "RatFun":
        ring = self.ring
        op = _add if sign > 0 else _sub
        if not other.n:
            return self
        if not self.n:
            return other if sign > 0 else -other
        a, b, c, d = self.n, self.d, other.n, other.d
        if b == d:
            num = op(a, c)
            if not num:
                return RatFun.zero(ring)
            if _is_int_const(b):
                return RatFun._raw(ring, *_canon(num, b))
            return RatFun._make(ring, num, b)
        g = _g(b, d, ring)
        b1 = _exq(b, g, ring)
        d1 = _exq(d, g, ring)
        num = op(_mul(a, d1), _mul(c, b1))
        if not num:
            return RatFun.zero(ring)
        den = _mul(b, d1)
        if g is not _ONE:
            g2 = _g(num, g, ring)
            if g2 is not _ONE:
                num = _exquo(num, g2, ring)
                den = _exquo(den, g2, ring)
        return RatFun._raw(ring, *_canon(num, den))

    def __add__(self, other):
        return self._addsub(self._coerce(other), 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(self._coerce(other), -1)

    def __rsub__(self, other):
        return self._coerce(other)._addsub(self, -1)

    def __neg__(self):
        return RatFun._raw(self.ring, _neg(self.n), self.d)

    def __mul__(self, other):
        other = self._coerce(other)
        ring = self.ring
        if not self.n or not other.n:
            return RatFun.zero(ring)
        if self.is_one():
            return other
        if other.is_one():
            return self
        a, b, c, d = self.n, self.d, other.n, other.d
        g1 = _g(a, d, ring)
        g2 = _g(c, b, ring)
        num = _mul(_exq(a, g1, ring), _exq(c, g2, ring))
        den = _mul(_exq(b, g2, ring), _exq(d, g1, ring))
        return RatFun._raw(ring, *_canon(num, den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFun":
        if not self.n:
            raise ZeroDivisionError("inverse of zero in K")
        return RatFun._raw(self.ring, *_canon(self.d, self.n))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFun._raw(self.ring, _pow(self.n, e), _pow(self.d, e))

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.ring is other.ring and self.n == other.n and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.n.items()), frozenset(self.d.items())))
        return self._hash

    # -- parameter maps ----------------------------------------------------

    def shift(self, direction: str | int, amount: int) -> "RatFun":
        """Substitute ``p -> p + amount`` for one parameter ``p``.

        A translation is a ring automorphism preserving leading terms and
        content, so the canonical form survives without a gcd.
        """
        if isinstance(direction, str):
            if direction not in self.ring.index:
                raise KeyError(f"unknown parameter {direction!r}")
            direction = self.ring.index[direction]
        if not amount or not self.n:
            return self
        return RatFun._raw(
            self.ring,
            _shift(self.n, self.ring, direction, amount),
            _shift(self.d, self.ring, direction, amount),
        )

    def shift_many(self, amounts: Sequence[int]) -> "RatFun":
        r = self
        for i, a in enumerate(amounts):
            if a:
                r = r.shift(i, a)
        return r

    def substitute_scaled(self, delta: str = "delta") -> "RatFun":
        """Replace every parameter p by p/delta and clear denominators.

        The result lives in the ring extended by ``delta`` (last variable).
        """
        ring = self.ring
        new = ring.extend(delta)
        if not self.n:
            return RatFun.zero(new)
        dn = max(ring.total_degree(m) for m in self.n)
        dd = max(ring.total_degree(m) for m in self.d)
        num = _homogenize(self.n, ring, new, dn)
        den = _homogenize(self.d, ring, new, dd)
        k = dd - dn
        dpow = {new.gens[-1] * abs(k): 1} if k else _ONE
        if k > 0:
            num = _mul(num, dpow)
        elif k < 0:
            den = _mul(den, dpow)
        return RatFun._raw(new, *_canon(num, den))

    def substitute(self, var: str | int, value) -> "RatFun":
        """Set one variable to a rational constant; drops it from the ring.

        Raises ``ZeroDivisionError`` if the denominator vanishes.
        """
        ring = self.ring
        i = ring.index[var] if isinstance(var, str) else var
        names = ring.names[:i] + ring.names[i + 1:]
        new = PolyRing(names)
        value = Fraction(value)

        def sub(d: dict) -> dict:
            out: dict = {}
            for m, c in d.items():
                e = list(ring.unpack(m))
                k = e.pop(i)
                v = c * value**k if k else c
                if v:
                    mm = new.pack(e)
                    out[mm] = out.get(mm, 0) + v
            return {m: c for m, c in out.items() if c}

        num = sub(self.n)
        den = sub(self.d)
        if not den:
            raise ZeroDivisionError(f"pole at {ring.names[i]} = {value}")
        num, a = _clear(num)
        den, b = _clear(den)
        num = {m: c * b for m, c in num.items()}
        den = {m: c * a for m, c in den.items()}
        return RatFun._make(new, num, den)

    def to_ring(self, ring: PolyRing) -> "RatFun":
        """Re-embed into a ring whose names are a superset of this one's."""
        if ring is self.ring:
            return self
        idx = [ring.index[name] for name in self.ring.names]

        def emb(d: dict) -> dict:
            out = {}
            for m, c in d.items():
                e = [0] * ring.nvars
                for j, x in zip(idx, self.ring.unpack(m)):
                    e[j] = x
                out[ring.pack(e)] = c
            return out

        return RatFun._make(ring, emb(self.n), emb(self.d))

    # -- evaluation --------------------------------------------------------

    def evaluate(self, values: Sequence):
        """Evaluate at a point (Fractions give exact results, complex numbers numeric)."""
        den = _evaluate(self.d, self.ring, values)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        num = _evaluate(self.n, self.ring, values)
        if isinstance(den, int) and isinstance(num, int):
            return Fraction(num, den)
        return num / den

    def evaluate_mod(self, values: Sequence[int], p: int) -> int:
        den = _evaluate_mod(self.d, self.ring, values, p)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes mod p")
        return _evaluate_mod(self.n, self.ring, values, p) * pow(den, -1, p) % p

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        num = format_poly(self.n, self.ring)
        if self.d == _ONE:
            return num
        den = format_poly(self.d, self.ring)
        if len(self.n) > 1:
            num = f"({num})"
        if len(self.d) > 1 or "*" in den:
            den = f"({den})"
        return f"{num} / {den}"

    def __repr__(self) -> str:
        return f"RatFun({self})"
