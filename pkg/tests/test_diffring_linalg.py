from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from twistcoh.diffring import (
    DiffElement,
    DiffMonomial,
    build_E,
    format_monomial,
    j_generators,
    left_multiply,
    plus_closure_step,
    shift_ball,
)
from twistcoh.linalg import (
    MatK,
    SingularPivotBlock,
    SupportEscapeError,
    build_matrix,
    cokernel,
    mat_identity,
    mat_inv,
    mat_mul,
    normalize_rows,
    rank,
    rank_bareiss,
    row_space_equal,
)
from twistcoh.symbolic import ModelSpec, PolyRing, RatFun, parse_ratfun

from conftest import ratfuns, to_sympy

CUBIC = ModelSpec.from_strings(["1 - x^3"], ["x"])
M05 = ModelSpec.from_strings(["x - 1", "y - 1", "x - y"], ["x", "y"])
SURFACE = ModelSpec.from_strings(["1 + x^2 + y^3 + x^2*y^3"], ["x", "y"])
MODELS = [CUBIC, M05, SURFACE, ModelSpec.from_strings(["x1^2 + x1*x2 - 3/x2 + 2"], ["x1", "x2"])]


def monomials(model, k=2):
    return list(shift_ball(model.ell + model.n, k))


def elements(model):
    mons = monomials(model, 1)
    return st.lists(
        st.tuples(st.sampled_from(mons), st.integers(-4, 4).filter(bool)), min_size=1, max_size=4
    ).map(lambda ts: DiffElement(model, {m: c * (1 + model.s(0)) for m, c in ts}))


# ---------------------------------------------------------------------------
# difference ring


def test_monomial_formatting():
    assert format_monomial((1, 2), 1) == "σs*σν^2"
    assert format_monomial((0, 0, 0, 1, 0), 3) == "σν1"
    assert str(DiffMonomial((1, 0, 0), (0, 2))) == "σs1*σν2^2"
    assert DiffMonomial.from_flat((1, 0, 0, 0, 2), 3).flat == (1, 0, 0, 0, 2)


def test_shift_ball_size():
    # |u|_1 <= k in d dimensions
    assert len(shift_ball(2, 1)) == 5
    assert len(shift_ball(2, 2)) == 13
    assert len(shift_ball(3, 1)) == 7
    assert all(sum(map(abs, u)) <= 2 for u in shift_ball(4, 2))


@pytest.mark.parametrize("model", MODELS[:3], ids=["cubic", "m05", "surface"])
@given(data=st.data())
def test_left_multiply_inverse(model, data):
    e = data.draw(elements(model))
    d = data.draw(st.integers(0, model.ell + model.n - 1))
    assert left_multiply(d, left_multiply(d, e, 1), -1) == e


@pytest.mark.parametrize("model", MODELS[:3], ids=["cubic", "m05", "surface"])
@given(data=st.data())
def test_shifts_commute(model, data):
    e = data.draw(elements(model))
    size = model.ell + model.n
    a = data.draw(st.integers(0, size - 1))
    b = data.draw(st.integers(0, size - 1))
    assert left_multiply(a, left_multiply(b, e)) == left_multiply(b, left_multiply(a, e))


def test_commutation_with_parameters():
    # sigma_nu * nu = (nu + 1) * sigma_nu
    nu = CUBIC.nu(0)
    e = DiffElement(CUBIC, {(0, 0): nu})
    got = left_multiply(1, e)
    assert got.terms == {(0, 1): nu + 1}


def _sympy_ratio(gen, model):
    """Sum over terms of c(theta) * f^-a * x^b: the action on L divided by L."""
    xs = sympy.symbols(model.vars)
    fs = [sympy.sympify(str(f).replace("^", "**"), locals=dict(zip(model.vars, xs)))
          for f in model.f]
    total = 0
    for m, c in gen.terms.items():
        a, b = m[:model.ell], m[model.ell:]
        term = to_sympy(c)
        for fi, ai in zip(fs, a):
            term *= fi ** (-ai)
        for xi, bi in zip(xs, b):
            term *= xi ** bi
        total += term
    return total, xs, fs


@pytest.mark.parametrize("model", MODELS, ids=["cubic", "m05", "surface", "laurent"])
def test_generators_annihilate_the_integrand(model):
    """Each generator maps L dx/x to an exact form.

    With L = prod f_i^-s_i prod x_j^nu_j the first family gives
    ``L - f_i * L / f_i = 0`` and the cleared second family gives
    ``x_j * dL/dx_j``, a total derivative against dx/x.
    """
    gens = j_generators(model, clear_inverse=True)
    s = [sympy.Symbol(n) for n in model.s_names]
    nu = [sympy.Symbol(n) for n in model.nu_names]
    for i in range(model.ell):
        ratio, _, _ = _sympy_ratio(gens[i], model)
        assert sympy.simplify(ratio) == 0
    for j in range(model.n):
        ratio, xs, fs = _sympy_ratio(gens[model.ell + j], model)
        logL = sum(-si * sympy.log(fi) for si, fi in zip(s, fs)) + sum(
            nj * sympy.log(xj) for nj, xj in zip(nu, xs))
        want = xs[j] * sympy.diff(logL, xs[j])
        assert sympy.simplify(ratio - want) == 0


@pytest.mark.parametrize("model", MODELS, ids=["cubic", "m05", "surface", "laurent"])
def test_cleared_generators_are_unit_multiples(model):
    plain = j_generators(model)
    cleared = j_generators(model, clear_inverse=True)
    for j in range(model.n):
        d = model.ell + j
        assert left_multiply(d, plain[d]) == cleared[d]
    assert plain[:model.ell] == cleared[:model.ell]


def test_cubic_generator_support():
    g = j_generators(CUBIC, clear_inverse=True)
    assert str(g[0]) == "1 * 1 + -1 * σs + 1 * σs*σν^3"
    assert set(g[1].terms) == {(0, 0), (1, 3)}


def test_build_E_cubic():
    B = [(0, 0), (0, 1), (0, 2)]
    E = build_E(B, j_generators(CUBIC, clear_inverse=True))
    assert E[-3:] == B
    assert set(E) == {(0, 3), (1, 2), (1, 1), (1, 0), (1, 3), (0, 0), (0, 1), (0, 2)}


def test_plus_closure_counts():
    gens = j_generators(CUBIC, clear_inverse=True)
    step = plus_closure_step(gens, 1)
    assert len(step) == 2 * len(shift_ball(2, 1))
    with pytest.raises(ValueError):
        plus_closure_step(gens, 0)


# ---------------------------------------------------------------------------
# exact linear algebra

R2 = PolyRing(("p", "q"))


def mat(rows, cols=None):
    return MatK.from_strings(R2, rows, cols)


def sympy_rank(m: MatK) -> int:
    return sympy.Matrix([[to_sympy(v) for v in r] for r in m.rows]).rank(simplify=True)


@pytest.mark.parametrize(
    "rows",
    [
        [["p", "q"], ["p^2", "p*q"]],
        [["1", "p", "q"], ["p", "p^2", "p*q"], ["q", "1", "0"]],
        [["1/(p-q)", "1"], ["1", "p-q"], ["0", "0"]],
        [["p", "0", "q"], ["0", "q", "p"], ["q", "p", "0"]],
    ],
)
def test_rank_three_ways(rows):
    m = mat(rows)
    assert rank(m) == rank_bareiss(m) == sympy_rank(m)


@given(st.lists(st.lists(ratfuns(R2), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_fraction_vs_bareiss(rows):
    m = MatK(R2, rows, list(range(3)))
    assert rank(m) == rank_bareiss(m)


@given(st.lists(st.lists(ratfuns(R2), min_size=2, max_size=2), min_size=1, max_size=4))
def test_cokernel_annihilates(rows):
    m = MatK(R2, rows, list(range(2)))
    ck = cokernel(m)
    assert len(ck.rows) == len(rows) - rank(m)
    for v in ck.rows:
        for j in range(2):
            total = RatFun.zero(R2)
            for i in range(len(rows)):
                total = total + v[i] * rows[i][j]
            assert total.is_zero()


def test_normalize_rows_identity_block():
    m = mat([["p", "1", "q"], ["1", "p", "0"], ["p+1", "p+1", "q"]], ["u", "v", "w"])
    nm = normalize_rows(m, ["v", "u"])
    block = nm.columns(["v", "u"])
    assert block == MatK.identity(R2, 2, ["v", "u"])
    assert row_space_equal(nm, m.select_rows([0, 1]))
    with pytest.raises(SingularPivotBlock):
        normalize_rows(mat([["1", "0", "1"], ["0", "0", "1"]], ["u", "v", "w"]), ["u", "v"])


def test_row_space_equal_detects_difference():
    a = mat([["1", "p"], ["0", "1"]])
    b = mat([["1", "0"], ["0", "1"]])
    c = mat([["1", "p"], ["2", "2*p"]])
    assert row_space_equal(a, b)
    assert not row_space_equal(c, b)


def test_build_matrix_and_escape():
    gens = j_generators(CUBIC, clear_inverse=True)
    cols = [(0, 0), (1, 0), (1, 3)]
    m = build_matrix(gens, cols)
    assert m.shape == (2, 3)
    with pytest.raises(SupportEscapeError):
        build_matrix(gens, cols[:2])


def test_text_round_trip():
    m = mat([["p/(q+1)", "0"], ["1", "-p^2"]], ["a", "b"])
    assert MatK.from_text(m.to_text(), R2) == m


@given(st.lists(st.lists(ratfuns(R2), min_size=2, max_size=2), min_size=2, max_size=2))
def test_inverse(rows):
    try:
        inv = mat_inv(rows)
    except ZeroDivisionError:
        det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        assert det.is_zero()
        return
    assert mat_mul(rows, inv) == mat_identity(R2, 2)


def test_specialize():
    m = mat([["p/(q+1)", "1"]])
    assert m.specialize([Fraction(1), Fraction(1)])[0, 0] == 0.5
    assert parse_ratfun("p", R2).evaluate([2, 3]) == 2
