"""Laurent polynomials in the torus coordinates x_1..x_n with rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

Exps = tuple[int, ...]


def _order_key(e: Exps) -> tuple:
    # graded lex, descending when sorted with reverse=True
    return (sum(e), e)


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of ``c * x^e`` with integer (possibly negative) exponent vectors."""

    vars: tuple[str, ...]
    terms: Mapping[Exps, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        n = len(self.vars)
        for e, c in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for {self.vars}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        clean = {e: c for e, c in sorted(clean.items(), key=lambda t: _order_key(t[0]), reverse=True) if c}
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, vars: Sequence[str], c) -> "LaurentPoly":
        return cls(tuple(vars), {(0,) * len(vars): c})

    @classmethod
    def monomial(cls, vars: Sequence[str], exps: Sequence[int], c=1) -> "LaurentPoly":
        return cls(tuple(vars), {tuple(exps): c})

    @classmethod
    def gen(cls, vars: Sequence[str], i: int) -> "LaurentPoly":
        e = [0] * len(vars)
        e[i] = 1
        return cls.monomial(vars, e)

    @property
    def n(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        return LaurentPoly.constant(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms.items()
            return LaurentPoly(self.vars, {tuple(k * x for x in e): c**k})
        result = LaurentPoly.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if not other.is_monomial():
            raise ValueError("division by a non-monomial Laurent polynomial")
        return self * other ** -1

    def derivative(self, j: int) -> "LaurentPoly":
        t = {}
        for e, c in self.terms.items():
            if e[j]:
                ee = list(e)
                ee[j] -= 1
                t[tuple(ee)] = c * e[j]
        return LaurentPoly(self.vars, t)

    def degree_bounds(self) -> tuple[Exps, Exps]:
        """Componentwise min and max exponents (zeros for the zero polynomial)."""
        if not self.terms:
            z = (0,) * self.n
            return z, z
        es = list(self.terms)
        lo = tuple(min(e[j] for e in es) for j in range(self.n))
        hi = tuple(max(e[j] for e in es) for j in range(self.n))
        return lo, hi

    def shift_exponents(self, delta: Sequence[int]) -> "LaurentPoly":
        return LaurentPoly(self.vars, {tuple(a + b for a, b in zip(e, delta)): c for e, c in self.terms.items()})

    def evaluate(self, x: Sequence):
        total = 0
        for e, c in self.terms.items():
            t = complex(c) if not isinstance(x[0], Fraction) else c
            for xj, k in zip(x, e):
                if k:
                    t = t * xj**k
            total = total + t
        return total

    def compile(self) -> "CompiledLaurent":
        return CompiledLaurent.from_poly(self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.terms.items()):
            neg = c < 0
            a = -c if neg else c
            fac = []
            for name, k in zip(self.vars, e):
                if k == 1:
                    fac.append(name)
                elif k:
                    fac.append(f"{name}^{k}")
            if not fac:
                body = str(a)
            elif a == 1:
                body = "*".join(fac)
            else:
                body = f"{a}*" + "*".join(fac)
            if i == 0:
                out.append("-" + body if neg else body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


@dataclass(frozen=True)
class CompiledLaurent:
    """Vectorized numeric evaluator for a Laurent polynomial."""

    exps: np.ndarray
    coeffs: np.ndarray

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "CompiledLaurent":
        if p.terms:
            exps = np.array(list(p.terms), dtype=np.int64).reshape(len(p.terms), p.n)
            coeffs = np.array([complex(c) for c in p.terms.values()], dtype=complex)
        else:
            exps = np.zeros((0, p.n), dtype=np.int64)
            coeffs = np.zeros(0, dtype=complex)
        return cls(exps, coeffs)

    def __call__(self, x: np.ndarray) -> complex:
        x = np.asarray(x, dtype=complex)
        return complex(np.sum(self.coeffs * np.prod(x[None, :] ** self.exps, axis=1)))
