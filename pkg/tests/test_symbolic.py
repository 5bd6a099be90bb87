from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from twistcoh.symbolic import (
    LaurentPoly,
    ModelSpec,
    MPoly,
    ParseError,
    PolyRing,
    RatFun,
    gcd_mpoly,
    parse_laurent,
    parse_ratfun,
)

from conftest import RING, mpolys, ratfuns, rationals, sympy_equal, to_sympy

# ---------------------------------------------------------------------------
# polynomials


@given(mpolys(), mpolys(), mpolys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == MPoly(RING)


@given(mpolys(), mpolys())
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p) * to_sympy(q) - to_sympy(p * q)) == 0


@given(mpolys(allow_zero=False), mpolys(allow_zero=False))
def test_exact_quotient(p, q):
    assert (p * q).exquo(q) == p


def test_inexact_division_raises():
    a, b = MPoly.gen(RING, "a"), MPoly.gen(RING, "b")
    with pytest.raises(ValueError):
        (a * a + b).exquo(a)


@given(mpolys(max_terms=3), mpolys(max_terms=3), mpolys(max_terms=3))
def test_gcd_matches_sympy(p, q, g):
    assume(not g.is_zero())
    a, b = p * g, q * g
    got = gcd_mpoly(a, b)
    want = sympy.gcd(to_sympy(a, RING.names), to_sympy(b, RING.names))
    if got.is_zero():
        assert want == 0
        return
    # equal up to a rational unit
    ratio = sympy.cancel(to_sympy(got) / want)
    assert ratio.is_number and ratio != 0
    if not a.is_zero():
        a.exquo(got)
    if not b.is_zero():
        b.exquo(got)


@given(mpolys(), st.lists(rationals, min_size=3, max_size=3))
def test_evaluation_is_a_homomorphism(p, x):
    q = p * p + p
    assert q.evaluate(x) == p.evaluate(x) ** 2 + p.evaluate(x)


@given(mpolys(), st.integers(-3, 3), st.lists(rationals, min_size=3, max_size=3))
def test_shift_is_translation(p, k, x):
    shifted = p.shift("b", k)
    y = list(x)
    y[1] += k
    assert shifted.evaluate(x) == p.evaluate(y)
    assert shifted.shift("b", -k) == p


def test_ring_interning_and_duplicates():
    assert PolyRing(("a", "b", "c")) is RING
    with pytest.raises(ValueError):
        PolyRing(("a", "a"))


# ---------------------------------------------------------------------------
# rational functions


@given(ratfuns(), ratfuns(), ratfuns())
def test_field_axioms(x, y, z):
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x * x.inverse() == RatFun.one(RING)


@given(ratfuns(), ratfuns())
def test_canonical_form_matches_sympy(x, y):
    s = x + y
    assert sympy.cancel(to_sympy(s) - (to_sympy(x) + to_sympy(y))) == 0
    # reduced: numerator and denominator coprime
    g = sympy.gcd(*sympy.fraction(sympy.together(to_sympy(s))))
    assert g.is_number


@given(ratfuns())
def test_printing_round_trip(x):
    assert parse_ratfun(str(x), RING) == x


@given(ratfuns(), st.integers(-2, 2), st.integers(0, 2))
def test_shift_inverse(x, k, var):
    assert x.shift(var, k).shift(var, -k) == x


@given(ratfuns(), ratfuns(), st.integers(1, 2))
def test_shift_is_automorphism(x, y, k):
    assert (x * y).shift("a", k) == x.shift("a", k) * y.shift("a", k)
    assert (x + y).shift("c", k) == x.shift("c", k) + y.shift("c", k)


def test_equal_after_reduction():
    a = parse_ratfun("(a^2 - b^2)/(a + b)", RING)
    assert a == parse_ratfun("a - b", RING)
    assert str(parse_ratfun("(2*a)/(4*b)", RING)) == "a / (2*b)"
    assert str(parse_ratfun("-1/(-a-1)", RING)) == "1 / (a + 1)"


@pytest.mark.parametrize(
    "text, limit",
    [
        ("a/(a+b)", "a / (a + b)"),
        ("(a + 1)/(a + b)", "a / (a + b)"),
        ("(a + 1)/(a^2 + 1)", "0"),
    ],
)
def test_delta_scaling_limit(text, limit):
    r = parse_ratfun(text, RING)
    lim = r.substitute_scaled("delta").substitute("delta", 0)
    assert str(lim) == limit


def test_delta_scaling_pole():
    r = parse_ratfun("(a^2 + 1)/(a + 1)", RING)
    with pytest.raises(ZeroDivisionError):
        r.substitute_scaled("delta").substitute("delta", 0)


@given(ratfuns(), rationals.filter(bool), st.lists(rationals, min_size=3, max_size=3))
def test_delta_scaling_is_consistent(x, delta, vals):
    scaled = x.substitute_scaled("delta")
    try:
        want = x.evaluate([v / delta for v in vals])
        got = scaled.evaluate(list(vals) + [delta])
    except ZeroDivisionError:
        return
    assert got == want


def test_evaluate_mod_matches_exact():
    r = parse_ratfun("(a^2 + 3*b)/(c - 2)", RING)
    p = 1_000_003
    exact = r.evaluate([Fraction(2), Fraction(5), Fraction(7)])
    assert r.evaluate_mod([2, 5, 7], p) == exact.numerator * pow(exact.denominator, -1, p) % p


# ---------------------------------------------------------------------------
# parser and Laurent polynomials


@pytest.mark.parametrize(
    "text, terms",
    [
        ("1 - x^3", {(0,): 1, (3,): -1}),
        ("x**-2 + 2/x", {(-2,): 1, (-1,): 2}),
        ("-(x - 1)^2", {(2,): -1, (1,): 2, (0,): -1}),
        ("3*x*x/x", {(1,): 3}),
        ("1/2*x", {(1,): Fraction(1, 2)}),
    ],
)
def test_parse_laurent(text, terms):
    assert dict(parse_laurent(text, ["x"]).terms) == terms


@pytest.mark.parametrize(
    "text",
    ["1 + ", "x^^2", "(x + 1", "y", "x^99999", "1/(x + 1)", "x^y", "1 / 0", ""],
)
def test_parse_errors(text):
    with pytest.raises((ParseError, ZeroDivisionError, ValueError)):
        parse_laurent(text, ["x"])


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_laurent("1 + x^^3", ["x"])
    assert info.value.pos == 6


@given(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                       st.integers(-9, 9).filter(bool), max_size=5))
def test_laurent_round_trip(terms):
    p = LaurentPoly(("x", "y"), terms)
    assert parse_laurent(str(p), ["x", "y"]) == p


@given(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                       st.integers(-9, 9).filter(bool), max_size=5),
       st.integers(0, 1))
def test_laurent_derivative_matches_sympy(terms, j):
    p = LaurentPoly(("x", "y"), terms)
    x, y = sympy.symbols("x y")
    expr = sum(c * x**e[0] * y**e[1] for e, c in terms.items())
    got = sympy.sympify(str(p.derivative(j)).replace("^", "**"), locals={"x": x, "y": y})
    assert sympy_equal(got, sympy.diff(expr, [x, y][j]))


def test_compiled_evaluation_matches_exact():
    p = parse_laurent("x^2*y - 3/y + 1/2", ["x", "y"])
    pt = [1.5 + 0.5j, -0.25 + 2j]
    assert abs(p.compile()(pt) - complex(p.evaluate(pt))) < 1e-12


# ---------------------------------------------------------------------------
# models


def test_model_parameter_names():
    m = ModelSpec.from_strings(["x - 1", "y - 1", "x - y"], ["x", "y"])
    assert m.param_names == ("s1", "s2", "s3", "nu1", "nu2")
    assert m.ring.names == ("nu1", "nu2", "s1", "s2", "s3")
    one = ModelSpec.from_strings(["1 - x^3"], ["x"])
    assert one.param_names == ("s", "nu")
    assert [one.ring.names[i] for i in one.direction_ring_index] == ["s", "nu"]


def test_model_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        ModelSpec.from_strings(["x - x"], ["x"])
