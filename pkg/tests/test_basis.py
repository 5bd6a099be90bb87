from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistcoh.basis import (
    CandidatePool,
    PoolExhausted,
    evaluate_monomial,
    evaluation_rows,
    find_basis,
    format_basis,
    select_basis,
)
from twistcoh.fixtures import get_fixture
from twistcoh.numeric import critical_points


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 4))
def test_pool_size_and_order(ell, n, degree):
    monos = CandidatePool(ell, n, degree).monomials
    assert len(monos) == comb(ell + n + degree, degree)
    assert len(set(monos)) == len(monos)
    totals = [sum(m) for m in monos]
    assert totals == sorted(totals)
    assert monos[0] == (0,) * (ell + n)


def test_pool_prefers_coordinates():
    monos = CandidatePool(1, 2, 1).monomials
    assert monos == [(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 0)]


@pytest.mark.parametrize("name", ["cubic", "m05", "product_surface", "bubble", "triangle", "line"])
def test_reference_bases(name):
    fx = get_fixture(name)
    got = find_basis(fx.model())
    assert set(got) == set(fx.basis_monomials())


@pytest.mark.parametrize("seed", [0, 4, 9])
def test_basis_seed_invariance(seed):
    fx = get_fixture("product_surface")
    assert find_basis(fx.model(), seed=seed) == find_basis(fx.model(), seed=0)


def test_evaluation_matrix_is_well_conditioned():
    model = get_fixture("m05").model()
    pts, spec = critical_points(model, 0)
    basis, E = select_basis(model, CandidatePool(3, 2, 2), pts, spec)
    assert E.values.shape == (2, 2)
    assert E.smallest_singular_value() > 1e-6
    assert np.allclose(E.values, evaluation_rows(basis, pts, model, spec))


def test_evaluate_monomial():
    model = get_fixture("cubic").model()
    x = np.array([0.5 + 0.5j])
    f = 1 - x[0] ** 3
    assert np.isclose(evaluate_monomial((2, 1), x, model), x[0] / f**2)


def test_pool_exhausted():
    model = get_fixture("cubic").model()
    with pytest.raises(PoolExhausted) as info:
        find_basis(model, degree=1, max_degree=1)
    assert info.value.found == 2 and info.value.chi == 3


def test_dependent_candidates_skipped():
    # 1/f takes one value on all critical points of the cubic
    model = get_fixture("cubic").model()
    pts, spec = critical_points(model, 0)
    with pytest.raises(PoolExhausted):
        select_basis(model, [(0, 0), (1, 0), (2, 0), (3, 0)], pts, spec)


def test_format_basis():
    assert format_basis([(0, 0, 0), (0, 1, 2)], 1) == ["1", "σν1*σν2^2"]
