"""The shift algebra R over K = Q(s, nu) and the generators of the left ideal J.

A difference monomial ``sigma_s^a sigma_nu^b`` is stored as a flat integer
tuple ``a + b`` of length l + n; direction ``d`` (0 <= d < l + n) refers to
``s_{d+1}`` for ``d < l`` and to ``nu_{d-l+1}`` otherwise.  Elements are
always written with coefficients on the left, and moving a shift past a
coefficient translates the coefficient:

    sigma^u * c(theta) = c(theta + u) * sigma^u.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .symbolic.model import ModelSpec
from .symbolic.ratfun import RatFun

Mono = tuple[int, ...]


@dataclass(frozen=True, order=True)
class DiffMonomial:
    """``sigma_s^a * sigma_nu^b`` with integer (possibly negative) exponents."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    @property
    def flat(self) -> Mono:
        return tuple(self.a) + tuple(self.b)

    @classmethod
    def from_flat(cls, m: Sequence[int], ell: int) -> "DiffMonomial":
        return cls(tuple(m[:ell]), tuple(m[ell:]))

    def __str__(self) -> str:
        return format_monomial(self.flat, len(self.a))


def mono_key(m: Mono) -> tuple:
    """Canonical order: total absolute degree, then lexicographic."""
    return (sum(abs(x) for x in m), m)


def unit(size: int, d: int, sign: int = 1) -> Mono:
    e = [0] * size
    e[d] = sign
    return tuple(e)


def mono_add(m: Mono, u: Mono) -> Mono:
    return tuple(x + y for x, y in zip(m, u))


def _direction_label(d: int, ell: int, n: int) -> str:
    if d < ell:
        return "σs" if ell == 1 else f"σs{d + 1}"
    j = d - ell
    return "σν" if n == 1 else f"σν{j + 1}"


def format_monomial(m: Mono, ell: int) -> str:
    n = len(m) - ell
    parts = []
    for d, e in enumerate(m):
        if e:
            lab = _direction_label(d, ell, n)
            parts.append(lab if e == 1 else f"{lab}^{e}")
    return "*".join(parts) if parts else "1"


@lru_cache(maxsize=None)
def shift_ball(size: int, k: int) -> tuple[Mono, ...]:
    """All integer vectors u with |u|_1 <= k, in canonical order."""
    out = [u for u in product(range(-k, k + 1), repeat=size) if sum(abs(x) for x in u) <= k]
    return tuple(sorted(out, key=mono_key))


def shift_coeff(c: RatFun, u: Mono, ring_index: Sequence[int]) -> RatFun:
    """``c(theta + u)`` where ``u`` is given in direction order."""
    for d, x in enumerate(u):
        if x:
            c = c.shift(ring_index[d], x)
    return c


class DiffElement:
    """Finite K-linear combination of difference monomials (coefficients on the left)."""

    __slots__ = ("model", "terms")

    def __init__(self, model: ModelSpec, terms: Mapping[Mono, RatFun] | None = None):
        self.model = model
        clean = {}
        if terms:
            size = model.ell + model.n
            for m, c in terms.items():
                m = tuple(m.flat if isinstance(m, DiffMonomial) else m)
                if len(m) != size:
                    raise ValueError(f"monomial {m} has wrong length {len(m)} != {size}")
                if not isinstance(c, RatFun):
                    c = RatFun.constant(model.ring, c)
                if not c.is_zero():
                    clean[m] = clean[m] + c if m in clean else c
        self.terms = {m: clean[m] for m in sorted(clean, key=mono_key) if not clean[m].is_zero()}

    @classmethod
    def monomial(cls, model: ModelSpec, m: Mono, c=1) -> "DiffElement":
        return cls(model, {tuple(m): c})

    @property
    def support(self) -> list[Mono]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, DiffElement):
            return NotImplemented
        return self.model == other.model and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "DiffElement") -> "DiffElement":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return DiffElement(self.model, t)

    def __neg__(self) -> "DiffElement":
        return DiffElement(self.model, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "DiffElement") -> "DiffElement":
        return self + (-other)

    def scale(self, c: RatFun) -> "DiffElement":
        """Left multiplication by a field element."""
        return DiffElement(self.model, {m: c * v for m, v in self.terms.items()})

    def shifted(self, u: Mono) -> "DiffElement":
        """Left multiplication by the monomial ``sigma^u``."""
        if not any(u):
            return self
        idx = self.model.direction_ring_index
        return DiffElement(
            self.model,
            {mono_add(m, u): shift_coeff(c, u, idx) for m, c in self.terms.items()},
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ell = self.model.ell
        parts = []
        for m, c in self.terms.items():
            cs = str(c)
            if " " in cs and not cs.startswith("("):
                cs = f"({cs})"
            parts.append(f"{cs} * {format_monomial(m, ell)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DiffElement({self})"


def left_multiply(direction: int, e: DiffElement, sign: int = 1) -> DiffElement:
    """``sigma_direction^{sign} * e``, normal ordered."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    size = e.model.ell + e.model.n
    if not 0 <= direction < size:
        raise ValueError(f"direction {direction} out of range for {size} directions")
    return e.shifted(unit(size, direction, sign))


def _laurent_to_terms(model: ModelSpec, poly, a_part: Mono, scale: RatFun, extra_b: Mono | None = None):
    """Terms ``scale * sigma_s^a_part * poly(sigma_nu)`` (poly has constant coefficients)."""
    out = {}
    for e, c in poly.terms.items():
        b = e if extra_b is None else mono_add(e, extra_b)
        out[tuple(a_part) + tuple(b)] = scale * RatFun.constant(model.ring, c)
    return out


def j_generators(model: ModelSpec, clear_inverse: bool = False) -> list[DiffElement]:
    """The l + n generators of the annihilating left ideal J.

    For each i: ``1 - sigma_{s_i} f_i(sigma_nu)``.  For each j:
    ``sigma_{nu_j}^{-1} nu_j - sum_i s_i sigma_{s_i} (d f_i / d x_j)(sigma_nu)``,
    normal ordered as ``(nu_j - 1) sigma_{nu_j}^{-1} - ...``.

    With ``clear_inverse=True`` the second family is left-multiplied by
    ``sigma_{nu_j}``, giving ``nu_j - sum_i s_i sigma_{s_i} sigma_{nu_j}
    (d f_i / d x_j)(sigma_nu)``.  Since ``sigma_{nu_j}`` is a unit of R this
    generates the same left ideal but has no negative exponents.
    """
    ell, n = model.ell, model.n
    ring = model.ring
    one = RatFun.one(ring)
    gens = []
    for i, f in enumerate(model.f):
        a = unit(ell, i)
        terms = {(0,) * (ell + n): one}
        for m, c in _laurent_to_terms(model, f, a, -one).items():
            terms[m] = terms[m] + c if m in terms else c
        gens.append(DiffElement(model, terms))
    for j in range(n):
        terms: dict[Mono, RatFun] = {}
        nu = model.nu(j)
        if clear_inverse:
            terms[(0,) * (ell + n)] = nu
            shift_b = unit(n, j)
        else:
            terms[(0,) * ell + unit(n, j, -1)] = nu - 1
            shift_b = None
        for i in range(ell):
            df = model.df[i][j]
            for m, c in _laurent_to_terms(model, df, unit(ell, i), -model.s(i), shift_b).items():
                terms[m] = terms[m] + c if m in terms else c
        gens.append(DiffElement(model, terms))
    return gens


def plus_closure_step(span: Sequence[DiffElement], k: int) -> list[DiffElement]:
    """Generators of ``S^[k]``: every ``sigma^u * v`` with ``|u|_1 <= k``, exact duplicates removed."""
    if k < 1:
        raise ValueError("k must be positive")
    if not span:
        return []
    model = span[0].model
    size = model.ell + model.n
    out = []
    seen = set()
    for v in span:
        for u in shift_ball(size, k):
            w = v.shifted(u)
            if w in seen:
                continue
            seen.add(w)
            out.append(w)
    return out


def support_union(elements: Iterable[DiffElement]) -> set[Mono]:
    out = set()
    for e in elements:
        out.update(e.terms)
    return out


def build_E(B: Sequence[Mono], generators: Sequence[DiffElement]) -> list[Mono]:
    """``B`` with its one-step forward shifts and the generator supports.

    The result lists E minus B in canonical order, followed by B in the
    given order.
    """
    if not B:
        raise ValueError("B must be nonempty")
    B = [tuple(b) for b in B]
    size = len(B[0])
    pool = set(B)
    for d in range(size):
        u = unit(size, d)
        pool.update(mono_add(b, u) for b in B)
    pool |= support_union(generators)
    bset = set(B)
    rest = sorted((m for m in pool if m not in bset), key=mono_key)
    return rest + B


def expand_laurent_class(model: ModelSpec, poly) -> dict[Mono, Fraction]:
    """Map a Laurent polynomial in x to difference monomials ``sigma_nu^b`` (a = 0)."""
    ell = model.ell
    return {(0,) * ell + tuple(e): c for e, c in poly.terms.items()}
