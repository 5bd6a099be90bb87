"""Sparse multivariate polynomials over Q in the parameter variables.

Monomials are packed into a single Python int: one 16-bit slot per
variable (first variable most significant) with the total degree stored
above all slots.  Integer comparison of packed keys is then graded
lexicographic order, and monomial multiplication is integer addition.

The low-level ``_``-prefixed helpers work on raw ``{packed: coeff}`` dicts
and are shared with :mod:`twistcoh.symbolic.ratfun`, which keeps
numerators and denominators as integer polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from numbers import Rational
from typing import Iterable, Mapping, Sequence

BITS = 16
MASK = (1 << BITS) - 1
GUARD = 1 << (BITS - 1)
MAX_EXP = GUARD - 1


class PolyRing:
    """Ordered set of variable names plus the packing layout for them.

    Instances are interned per name tuple so identity comparison is enough
    to decide whether two polynomials live in the same ring.
    """

    _cache: dict[tuple[str, ...], "PolyRing"] = {}

    def __new__(cls, names: Sequence[str]):
        names = tuple(names)
        ring = cls._cache.get(names)
        if ring is not None:
            return ring
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        ring = super().__new__(cls)
        nv = len(names)
        ring.names = names
        ring.nvars = nv
        ring.index = {name: i for i, name in enumerate(names)}
        ring.shifts = tuple(BITS * (nv - 1 - i) for i in range(nv))
        ring.deg_shift = BITS * nv
        ring.guard = sum(GUARD << s for s in ring.shifts)
        ring.gens = tuple((1 << s) | (1 << ring.deg_shift) for s in ring.shifts)
        cls._cache[names] = ring
        return ring

    def __repr__(self) -> str:
        return f"PolyRing({list(self.names)!r})"

    def __reduce__(self):
        return (PolyRing, (self.names,))

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector {tuple(exps)} has wrong length for {self.names}")
        m = 0
        d = 0
        for s, e in zip(self.shifts, exps):
            if e < 0 or e > MAX_EXP:
                raise OverflowError(f"exponent {e} out of range [0, {MAX_EXP}]")
            m |= e << s
            d += e
        return m | (d << self.deg_shift)

    def unpack(self, m: int) -> tuple[int, ...]:
        return tuple((m >> s) & MASK for s in self.shifts)

    def degree_of(self, m: int, i: int) -> int:
        return (m >> self.shifts[i]) & MASK

    def total_degree(self, m: int) -> int:
        return m >> self.deg_shift

    def divides(self, a: int, b: int) -> bool:
        """True iff monomial ``a`` divides monomial ``b``."""
        g = self.guard
        return ((b | g) - a) & g == g

    def extend(self, name: str) -> "PolyRing":
        return PolyRing(self.names + (name,))


# ---------------------------------------------------------------------------
# raw dict arithmetic


def _add(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    r = dict(a)
    for m, c in b.items():
        v = r.get(m)
        if v is None:
            r[m] = c
        else:
            v += c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def _sub(a: dict, b: dict) -> dict:
    r = dict(a)
    for m, c in b.items():
        v = r.get(m)
        if v is None:
            r[m] = -c
        else:
            v -= c
            if v:
                r[m] = v
            else:
                del r[m]
    return r


def _neg(a: dict) -> dict:
    return {m: -c for m, c in a.items()}


def _scale(a: dict, c) -> dict:
    if not c:
        return {}
    if c == 1:
        return a
    return {m: v * c for m, v in a.items()}


def _mul(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 1:
        (m1, c1), = a.items()
        if m1 == 0:
            return _scale(b, c1)
        return {m1 + m2: c1 * c2 for m2, c2 in b.items()}
    r: dict = {}
    get = r.get
    bi = list(b.items())
    for m1, c1 in a.items():
        for m2, c2 in bi:
            m = m1 + m2
            r[m] = get(m, 0) + c1 * c2
    return {m: c for m, c in r.items() if c}


def _pow(a: dict, e: int) -> dict:
    if e < 0:
        raise ValueError("negative power of a polynomial")
    result = {0: 1}
    base = a
    while e:
        if e & 1:
            result = _mul(result, base)
        e >>= 1
        if e:
            base = _mul(base, base)
    return result


def _is_one(a: dict) -> bool:
    return len(a) == 1 and a.get(0) == 1


def _exquo(a: dict, b: dict, ring: PolyRing):
    """Exact quotient ``a / b`` or ``None`` when ``b`` does not divide ``a``.

    Integer coefficients are divided exactly in Z; any non-integer
    coefficient switches to division in Q.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    lb = max(b)
    cb = b[lb]
    if len(b) == 1:
        if not all(ring.divides(lb, m) for m in a):
            return None
        if lb == 0 and cb == 1:
            return dict(a)
        out = {}
        for m, c in a.items():
            q = _cdiv(c, cb)
            if q is None:
                return None
            out[m - lb] = q
        return out
    rest = [(m, c) for m, c in b.items() if m != lb]
    r = dict(a)
    q = {}
    divides = ring.divides
    while r:
        lm = max(r)
        if not divides(lb, lm):
            return None
        qc = _cdiv(r.pop(lm), cb)
        if qc is None:
            return None
        qm = lm - lb
        q[qm] = qc
        for m, c in rest:
            mm = qm + m
            v = r.get(mm, 0) - qc * c
            if v:
                r[mm] = v
            else:
                r.pop(mm, None)
    return q


def _cdiv(c, d):
    if type(c) is int and type(d) is int:
        qq, rr = divmod(c, d)
        return None if rr else qq
    return Fraction(c) / d


def _content(a: dict) -> int:
    g = 0
    for c in a.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def _lc(a: dict):
    return a[max(a)]


def _positive(a: dict) -> dict:
    if a and a[max(a)] < 0:
        return _neg(a)
    return a


def _var_degrees(a: dict, ring: PolyRing) -> list[int]:
    degs = [0] * ring.nvars
    for m in a:
        if m:
            for i, s in enumerate(ring.shifts):
                e = (m >> s) & MASK
                if e > degs[i]:
                    degs[i] = e
    return degs


def _split(a: dict, ring: PolyRing, v: int) -> list[dict]:
    """View ``a`` as a dense univariate polynomial in variable ``v``."""
    s = ring.shifts[v]
    ds = ring.deg_shift
    parts: dict[int, dict] = {}
    for m, c in a.items():
        e = (m >> s) & MASK
        parts.setdefault(e, {})[m - (e << s) - (e << ds)] = c
    top = max(parts)
    return [parts.get(e, {}) for e in range(top + 1)]


def _join(coeffs: list[dict], ring: PolyRing, v: int) -> dict:
    s = ring.shifts[v]
    ds = ring.deg_shift
    out = {}
    for e, part in enumerate(coeffs):
        shift = (e << s) + (e << ds)
        for m, c in part.items():
            out[m + shift] = c
    return out


# ---------------------------------------------------------------------------
# gcd over Z[x_1..x_n]: recursive primitive-part subresultant PRS


def _monomial_gcd(m: int, c: int, a: dict, ring: PolyRing) -> dict:
    g = igcd(c, _content(a))
    exps = list(ring.unpack(m))
    for t in a:
        if not any(exps):
            break
        te = ring.unpack(t)
        exps = [min(x, y) for x, y in zip(exps, te)]
    return {ring.pack(exps): g}


def _gcd_z(a: dict, b: dict, ring: PolyRing) -> dict:
    """gcd of two integer polynomials, normalized to positive leading coefficient."""
    if not a:
        return _positive(b)
    if not b:
        return _positive(a)
    if len(a) == 1:
        (m, c), = a.items()
        return _monomial_gcd(m, abs(c), b, ring)
    if len(b) == 1:
        (m, c), = b.items()
        return _monomial_gcd(m, abs(c), a, ring)
    if a == b:
        return _positive(a)
    # trial division catches the common "one divides the other" case
    if len(b) <= len(a):
        if _exquo(a, b, ring) is not None:
            return _positive(b)
    elif _exquo(b, a, ring) is not None:
        return _positive(a)
    da = _var_degrees(a, ring)
    db = _var_degrees(b, ring)
    for v in range(ring.nvars):
        if da[v] and not db[v]:
            return _gcd_z(_content_in(a, ring, v), b, ring)
        if db[v] and not da[v]:
            return _gcd_z(a, _content_in(b, ring, v), ring)
    common = [v for v in range(ring.nvars) if da[v]]
    v = min(common, key=lambda i: (max(da[i], db[i]), -i))
    A = _split(a, ring, v)
    B = _split(b, ring, v)
    ca = _gcd_list(A, ring)
    cb = _gcd_list(B, ring)
    c = _gcd_z(ca, cb, ring)
    if not _is_one(ca):
        A = [_exquo(x, ca, ring) for x in A]
    if not _is_one(cb):
        B = [_exquo(x, cb, ring) for x in B]
    if len(A) < len(B):
        A, B = B, A
    G = _subresultant(A, B, ring)
    if len(G) == 1:
        return c
    cg = _gcd_list(G, ring)
    if not _is_one(cg):
        G = [_exquo(x, cg, ring) for x in G]
    return _positive(_mul(c, _join(G, ring, v)))


def _gcd_list(coeffs: Iterable[dict], ring: PolyRing) -> dict:
    g: dict = {}
    for x in coeffs:
        if x:
            g = _gcd_z(g, x, ring) if g else _positive(x)
            if len(g) == 1 and g.get(0) == 1:
                return g
    return g


def _content_in(a: dict, ring: PolyRing, v: int) -> dict:
    return _gcd_list(_split(a, ring, v), ring)


def _strip(p: list[dict]) -> list[dict]:
    while p and not p[-1]:
        p.pop()
    return p


def _prem(A: list[dict], B: list[dict]) -> list[dict]:
    dB = len(B) - 1
    lcB = B[-1]
    R = list(A)
    e = len(A) - len(B) + 1
    while R and len(R) - 1 >= dB:
        d = len(R) - 1
        lcR = R[d]
        shift = d - dB
        new = [_mul(lcB, c) if c else c for c in R[:d]]
        for i in range(dB):
            if B[i]:
                new[i + shift] = _sub(new[i + shift], _mul(lcR, B[i]))
        R = _strip(new)
        e -= 1
    if e > 0 and R:
        f = _pow(lcB, e)
        R = [_mul(c, f) if c else c for c in R]
    return R


def _subresultant(A: list[dict], B: list[dict], ring: PolyRing) -> list[dict]:
    """Last nonzero subresultant of primitive A, B with deg A >= deg B."""
    g = {0: 1}
    h = {0: 1}
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            return B
        if len(R) == 1:
            return [{0: 1}]
        div = _mul(g, _pow(h, delta))
        A, B = B, [_exquo(c, div, ring) if c else c for c in R]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = _exquo(_pow(g, delta), _pow(h, delta - 1), ring)


# ---------------------------------------------------------------------------
# public polynomial type


def _as_coeff(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _as_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficient {c!r} is not rational")


def _clear(d: dict) -> tuple[dict, int]:
    """Scale a Q-polynomial to an integer one; returns (poly, multiplier)."""
    den = 1
    for c in d.values():
        if type(c) is not int:
            den = den * c.denominator // igcd(den, c.denominator)
    if den == 1:
        return d, 1
    return {m: int(c * den) for m, c in d.items()}, den


def _fmt_coeff(c) -> str:
    return str(c)


def format_poly(d: dict, ring: PolyRing) -> str:
    """Canonical text (descending grlex) for a raw polynomial dict."""
    if not d:
        return "0"
    parts = []
    for i, m in enumerate(sorted(d, reverse=True)):
        c = d[m]
        neg = c < 0
        a = -c if neg else c
        factors = []
        for name, e in zip(ring.names, ring.unpack(m)):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        if not factors:
            body = _fmt_coeff(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(a) + "*" + "*".join(factors)
        if i == 0:
            parts.append("-" + body if neg else body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


class MPoly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("ring", "_d", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Sequence[int], object] | None = None):
        self.ring = ring
        d = {}
        if terms:
            for exps, c in terms.items():
                c = _as_coeff(c)
                if c:
                    m = ring.pack(exps)
                    v = d.get(m, 0) + c
                    if v:
                        d[m] = v
                    else:
                        d.pop(m, None)
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, ring: PolyRing, d: dict) -> "MPoly":
        p = object.__new__(cls)
        p.ring = ring
        p._d = d
        p._hash = None
        return p

    @classmethod
    def constant(cls, ring: PolyRing, c) -> "MPoly":
        c = _as_coeff(c)
        return cls._raw(ring, {0: c} if c else {})

    @classmethod
    def gen(cls, ring: PolyRing, name: str | int) -> "MPoly":
        i = ring.index[name] if isinstance(name, str) else name
        return cls._raw(ring, {ring.gens[i]: 1})

    @property
    def vars(self) -> tuple[str, ...]:
        return self.ring.names

    @property
    def terms(self) -> dict[tuple[int, ...], object]:
        unpack = self.ring.unpack
        return {unpack(m): c for m, c in sorted(self._d.items(), reverse=True)}

    def is_zero(self) -> bool:
        return not self._d

    def is_constant(self) -> bool:
        return not self._d or (len(self._d) == 1 and 0 in self._d)

    def constant_value(self):
        return self._d.get(0, 0)

    def __len__(self) -> int:
        return len(self._d)

    def total_degree(self) -> int:
        return max((self.ring.total_degree(m) for m in self._d), default=-1)

    def degree(self, var: str | int) -> int:
        i = self.ring.index[var] if isinstance(var, str) else var
        return max((self.ring.degree_of(m, i) for m in self._d), default=-1)

    def leading_coefficient(self):
        return self._d[max(self._d)] if self._d else 0

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {self.ring.names} vs {other.ring.names}")
            return other
        return MPoly.constant(self.ring, other)

    def __add__(self, other):
        other = self._coerce(other)
        return MPoly._raw(self.ring, _add(self._d, other._d))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return MPoly._raw(self.ring, _sub(self._d, other._d))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return MPoly._raw(self.ring, _neg(self._d))

    def __mul__(self, other):
        other = self._coerce(other)
        return MPoly._raw(self.ring, _mul(self._d, other._d))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return MPoly._raw(self.ring, _pow(self._d, e))

    def exquo(self, other: "MPoly") -> "MPoly":
        """Exact division; raises ``ValueError`` if ``other`` does not divide ``self``."""
        other = self._coerce(other)
        q = _exquo(self._d, other._d, self.ring)
        if q is None:
            # integer division may fail where rational division succeeds
            a = {m: Fraction(c) for m, c in self._d.items()}
            q = _exquo(a, other._d, self.ring)
            if q is None:
                raise ValueError("inexact polynomial division")
            q = {m: _as_coeff(c) for m, c in q.items()}
        return MPoly._raw(self.ring, q)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring is other.ring and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._d == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self._d.items())))
        return self._hash

    def __str__(self) -> str:
        return format_poly(self._d, self.ring)

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def evaluate(self, values: Sequence):
        return _evaluate(self._d, self.ring, values)

    def shift(self, var: str | int, amount) -> "MPoly":
        i = self.ring.index[var] if isinstance(var, str) else var
        return MPoly._raw(self.ring, _shift(self._d, self.ring, i, amount))

    def content(self):
        """Positive rational content (gcd of numerators / lcm of denominators)."""
        if not self._d:
            return 0
        d, den = _clear(self._d)
        return Fraction(_content(d), den)

    def primitive(self) -> "MPoly":
        """Integer primitive part with positive leading coefficient."""
        d, _ = _clear(self._d)
        g = _content(d)
        return MPoly._raw(self.ring, _positive({m: c // g for m, c in d.items()} if g > 1 else d))


def _evaluate(d: dict, ring: PolyRing, values: Sequence):
    if len(values) != ring.nvars:
        raise ValueError("wrong number of values")
    total = 0
    shifts = ring.shifts
    for m, c in d.items():
        t = c
        if m:
            for s, x in zip(shifts, values):
                e = (m >> s) & MASK
                if e:
                    t = t * x**e
        total = total + t
    return total


def _evaluate_mod(d: dict, ring: PolyRing, values: Sequence[int], p: int) -> int:
    total = 0
    shifts = ring.shifts
    for m, c in d.items():
        if type(c) is not int:
            t = c.numerator * pow(c.denominator, -1, p)
        else:
            t = c
        if m:
            for s, x in zip(shifts, values):
                e = (m >> s) & MASK
                if e:
                    t = t * pow(x, e, p)
        total += t
    return total % p


_BINOM_CACHE: dict[int, list[int]] = {}


def _binomials(n: int) -> list[int]:
    row = _BINOM_CACHE.get(n)
    if row is None:
        row = [1]
        for k in range(n):
            row.append(row[-1] * (n - k) // (k + 1))
        _BINOM_CACHE[n] = row
    return row


def _shift(d: dict, ring: PolyRing, i: int, amount) -> dict:
    """Substitute x_i -> x_i + amount."""
    if not amount:
        return d
    s = ring.shifts[i]
    ds = ring.deg_shift
    r: dict = {}
    get = r.get
    for m, c in d.items():
        e = (m >> s) & MASK
        if not e:
            r[m] = get(m, 0) + c
            continue
        base = m - (e << s) - (e << ds)
        binom = _binomials(e)
        apow = 1
        for k in range(e, -1, -1):
            # term: C(e, k) x_i^k amount^(e-k)
            mm = base + (k << s) + (k << ds)
            r[mm] = get(mm, 0) + c * binom[k] * apow
            apow *= amount
    return {m: c for m, c in r.items() if c}


def _homogenize(d: dict, ring: PolyRing, new_ring: PolyRing, degree: int) -> dict:
    """Homogenize to ``degree`` using the last variable of ``new_ring``."""
    out = {}
    unpack = ring.unpack
    pack = new_ring.pack
    for m, c in d.items():
        exps = unpack(m)
        out[pack(exps + (degree - sum(exps),))] = c
    return out


def gcd_mpoly(p: MPoly, q: MPoly) -> MPoly:
    """Greatest common divisor over Q, primitive with positive leading coefficient.

    ``gcd(p, 0)`` is the normalized ``p``; ``gcd(0, 0)`` is ``0``.
    """
    if p.ring is not q.ring:
        raise ValueError("ring mismatch")
    a, _ = _clear(p._d)
    b, _ = _clear(q._d)
    if not a and not b:
        return MPoly._raw(p.ring, {})
    g = _gcd_z(a, b, p.ring)
    c = _content(g)
    if c > 1:
        g = {m: v // c for m, v in g.items()}
    return MPoly._raw(p.ring, g)
