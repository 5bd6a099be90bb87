from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import settings
from hypothesis import strategies as st

from twistcoh.acceptance import Workspace
from twistcoh.symbolic import MPoly, PolyRing, RatFun

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

RING = PolyRing(("a", "b", "c"))


def to_sympy(obj, names=None):
    """Independent reading of a printed polynomial or rational function."""
    names = names or obj.ring.names
    syms = {n: sympy.Symbol(n) for n in names}
    return sympy.sympify(str(obj).replace("^", "**"), locals=syms)


def sympy_equal(a, b) -> bool:
    return sympy.simplify(a - b) == 0


@st.composite
def mpolys(draw, ring=RING, max_terms=4, max_deg=3, allow_zero=True):
    n = ring.nvars
    k = draw(st.integers(0 if allow_zero else 1, max_terms))
    terms = {}
    for _ in range(k):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        terms[e] = draw(st.integers(-5, 5).filter(bool))
    p = MPoly(ring, terms)
    if not allow_zero and p.is_zero():
        p = MPoly.constant(ring, 1)
    return p


@st.composite
def ratfuns(draw, ring=RING):
    num = draw(mpolys(ring))
    den = draw(mpolys(ring, allow_zero=False))
    return RatFun(num, den)


rationals = st.fractions(min_value=-7, max_value=7, max_denominator=9)


@pytest.fixture(scope="session")
def workspace() -> Workspace:
    return Workspace()


def points(*vals):
    return [Fraction(v) for v in vals]
