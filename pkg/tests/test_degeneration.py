import random

import numpy as np
import pytest
import sympy

from twistcoh.basis import evaluate_monomial
from twistcoh.contiguity import contiguity_matrices
from twistcoh.degeneration import (
    DegenerationPole,
    EigenMismatch,
    NumericAlgebra,
    characteristic_polynomial,
    commute_exactly,
    delta_limit,
    eigen_check,
    generator_labels,
    inverse_consistency,
    multiplication_matrices,
    polynomial_in_matrices,
    residue_pairing,
)
from twistcoh.fixtures import get_fixture
from twistcoh.linalg import mat_identity, mat_mul, mat_to_strings
from twistcoh.numeric import critical_points
from twistcoh.symbolic import parse_laurent, parse_ratfun

from conftest import to_sympy

NAMES = ["line", "cubic", "m05", "product_surface", "bubble", "triangle"]


@pytest.fixture(scope="module")
def sets():
    out = {}
    for name in NAMES:
        fx = get_fixture(name)
        out[name] = multiplication_matrices(contiguity_matrices(fx.model(), fx.basis_monomials()))
    return out


def test_cubic_multiplication_matrices(sets):
    ms = sets["cubic"]
    assert generator_labels(ms.cs) == ["1/f", "x"]
    assert mat_to_strings(ms.matrices["x"]) == [
        ["0", "0", "nu / (nu - 3*s)"], ["1", "0", "0"], ["0", "1", "0"]]


def test_cubic_characteristic_polynomial(sets):
    M = sets["cubic"].matrices["x"]
    cp = [str(c) for c in characteristic_polynomial(M)]
    assert cp == ["1", "0", "0", "-nu / (nu - 3*s)"]
    # independent: sympy determinant of lambda I - M
    lam = sympy.Symbol("lam")
    S = sympy.Matrix([[to_sympy(v) for v in r] for r in M])
    det = (lam * sympy.eye(3) - S).det()
    nu, s = sympy.symbols("nu s")
    assert sympy.simplify(det - (lam**3 - nu / (nu - 3 * s))) == 0


@pytest.mark.parametrize("name", NAMES)
def test_commute_and_inverse(sets, name):
    assert commute_exactly(sets[name])
    assert inverse_consistency(sets[name])


def test_cubic_relation_between_generators(sets):
    # f = 1 - x^3 so M_{1/f} (1 - M_x^3) = I
    ms = sets["cubic"]
    model = ms.model
    g = polynomial_in_matrices(parse_laurent("1 - x^3", ["x"]), [ms.matrices["x"]])
    assert mat_mul(ms.matrices["1/f"], g) == mat_identity(model.ring, 3)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("seed", [0, 6])
def test_eigenvalues_are_critical_values(sets, name, seed):
    ms = sets[name]
    pts, spec = critical_points(ms.model, seed)
    rep = eigen_check(ms, pts, spec)
    assert rep.max_mismatch < 1e-6 and rep.eigenvector_error < 1e-6


def test_eigen_check_detects_wrong_points(sets):
    ms = sets["bubble"]
    pts, _ = critical_points(ms.model, 0)
    _, other = critical_points(ms.model, 1)
    with pytest.raises(EigenMismatch):
        eigen_check(ms, pts, other)


@pytest.mark.parametrize("name", NAMES)
def test_residue_pairing(sets, name):
    ms = sets[name]
    pts, spec = critical_points(ms.model, 2)
    alg = NumericAlgebra(ms, spec)
    rng = random.Random(name)
    size = ms.model.ell + ms.model.n
    for _ in range(10):
        g = tuple(rng.randint(-1, 2) for _ in range(size))
        h = tuple(rng.randint(0, 2) for _ in range(size))
        assert residue_pairing(g, h, ms, pts, spec, alg).relative_error < 1e-6


def test_residue_pairing_combination(sets):
    ms = sets["m05"]
    pts, spec = critical_points(ms.model, 3)
    g = {(0, 0, 0, 1, 0): 2.0, (1, 0, 0, 0, 0): -1.5j}
    h = {(0, 0, 0, 0, 0): 1.0, (0, 1, 0, 0, 1): 0.5}
    assert residue_pairing(g, h, ms, pts, spec).relative_error < 1e-8


def test_numeric_monomial_matches_evaluation(sets):
    """The numeric multiplication matrix of a monomial has its values as eigenvalues."""
    ms = sets["triangle"]
    pts, spec = critical_points(ms.model, 0)
    alg = NumericAlgebra(ms, spec)
    m = (1, 2, 0, -1)
    eig = np.sort_complex(np.linalg.eigvals(alg.monomial(m)))
    vals = np.sort_complex(np.array([evaluate_monomial(m, p.x, ms.model) for p in pts]))
    assert np.allclose(eig, vals, rtol=1e-8)


def test_hessian_matrix_eigenvalues(sets):
    ms = sets["bubble"]
    pts, spec = critical_points(ms.model, 0)
    H = NumericAlgebra(ms, spec).hessian()
    eig = np.sort_complex(np.linalg.eigvals(H))
    assert np.allclose(eig, np.sort_complex(np.array([p.eta for p in pts])), rtol=1e-8)


@pytest.mark.parametrize(
    "text, limit",
    [("nu/(nu - 3*s + 3)", "nu / (nu - 3*s)"), ("(-nu + 3*s - 2)/(3*s)", "(-nu + 3*s) / (3*s)"),
     ("1/(nu + 1)", "0")],
)
def test_delta_limit(text, limit):
    ring = get_fixture("cubic").model().ring
    assert str(delta_limit(parse_ratfun(text, ring))) == limit


def test_delta_limit_pole():
    ring = get_fixture("cubic").model().ring
    with pytest.raises(DegenerationPole):
        delta_limit(parse_ratfun("(nu^2 + 1)/(nu + s)", ring))
