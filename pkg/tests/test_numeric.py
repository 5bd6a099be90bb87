import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from twistcoh.acceptance import vieta_error
from twistcoh.fixtures import get_fixture
from twistcoh.numeric import (
    SolveOptions,
    Specialization,
    TotalDegreeHomotopy,
    TrackerOptions,
    clear_denominators,
    critical_points,
    euler_characteristic,
    solve_system,
    track_path,
)
from twistcoh.numeric.homotopy import track_all
from twistcoh.numeric.solve import SolverError, _dedup
from twistcoh.numeric.system import CompiledPolys, LikelihoodEvaluator
from twistcoh.symbolic import LaurentPoly, ModelSpec

M05 = get_fixture("m05").model()
BUBBLE = get_fixture("bubble").model()


def log_likelihood(model, spec, x):
    val = sum(nu * np.log(xj) for nu, xj in zip(spec.nu, x))
    for s, f in zip(spec.s, model.f):
        val -= s * np.log(f.compile()(x))
    return val


def test_specialization_reproducible():
    a = Specialization.random(M05, 7)
    b = Specialization.random(M05, 7)
    c = Specialization.random(M05, 8)
    assert a == b and a != c
    mods = np.abs(np.array(a.s + a.nu))
    assert np.all((mods > 0.74) & (mods < 1.26))
    assert a.shifted(M05, [1, 0, 0, 0, -1]).s[0] == a.s[0] + 1


@pytest.mark.parametrize("model", [M05, BUBBLE], ids=["m05", "bubble"])
def test_omega_is_gradient_of_log_likelihood(model):
    spec = Specialization.random(model, 3)
    ev = LikelihoodEvaluator(model, spec)
    x = np.array([0.3 + 0.7j, 1.9 - 0.4j])
    h = 1e-6
    for j in range(model.n):
        e = np.zeros(model.n)
        e[j] = h
        fd = (log_likelihood(model, spec, x + e) - log_likelihood(model, spec, x - e)) / (2 * h)
        assert abs(fd - ev.omega(x)[j]) < 1e-6


@pytest.mark.parametrize("model", [M05, BUBBLE], ids=["m05", "bubble"])
def test_hessian_is_jacobian_of_omega(model):
    spec = Specialization.random(model, 4)
    ev = LikelihoodEvaluator(model, spec)
    x = np.array([0.3 + 0.7j, 1.9 - 0.4j])
    H = ev.hessian_matrix(x)
    h = 1e-6
    for k in range(model.n):
        e = np.zeros(model.n)
        e[k] = h
        col = (ev.omega(x + e) - ev.omega(x - e)) / (2 * h)
        assert np.allclose(col, H[:, k], atol=1e-6)
    assert np.allclose(H, H.T)


def test_cleared_system_matches_omega():
    spec = Specialization.random(M05, 1)
    F = clear_denominators(M05, spec).compile()
    ev = LikelihoodEvaluator(M05, spec)
    pts, _ = critical_points(M05, 1)
    for p in pts:
        assert np.max(np.abs(F(p.x))) < 1e-10
        assert np.max(np.abs(ev.omega(p.x))) < 1e-8


def test_compiled_jacobian_matches_finite_difference():
    exps = np.array([[2, 0], [1, 1], [0, 3], [0, 0]])
    F = CompiledPolys(exps, np.array([[1, 2, 0, -1], [0, 1, 1, 3]], dtype=complex))
    x = np.array([0.4 + 0.1j, -0.8 + 0.5j])
    h = 1e-6
    J = F.jacobian(x)
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        assert np.allclose((F(x + e) - F(x - e)) / (2 * h), J[:, k], atol=1e-7)
    assert F.degrees() == [2, 3]


def test_track_simple_system():
    F = CompiledPolys(np.array([[2], [0]]), np.array([[1, -2]], dtype=complex))
    hom = TotalDegreeHomotopy(F, np.random.default_rng(0))
    assert hom.path_count == 2
    ends = sorted(track_path(hom, s).end[0].real for s in hom.start_points())
    assert np.allclose(ends, [-np.sqrt(2), np.sqrt(2)])


def test_max_paths_guard():
    F = CompiledPolys(np.array([[4], [0]]), np.array([[1, -2]], dtype=complex))
    hom = TotalDegreeHomotopy(F, np.random.default_rng(0))
    with pytest.raises(ValueError):
        track_all(hom, TrackerOptions(), max_paths=3)


def test_dedup_merges_close_points():
    a = np.array([1 + 1j, 2.0])
    pts = [a, a + 1e-9, np.array([3.0, 1j]), a - 2e-9]
    assert len(_dedup(pts, 1e-6)) == 2


@pytest.mark.parametrize("name, chi", [("line", 1), ("cubic", 3), ("m05", 2), ("bubble", 3)])
@pytest.mark.parametrize("seed", [0, 11])
def test_counts(name, chi, seed):
    pts, _ = critical_points(get_fixture(name).model(), seed)
    assert len(pts) == chi
    assert all(abs(p.eta) > 1e-10 for p in pts)


def test_determinism():
    a, _ = critical_points(BUBBLE, 5)
    b, _ = critical_points(BUBBLE, 5)
    assert [p.coordinates for p in a] == [p.coordinates for p in b]


def test_gamma_check_and_report():
    rep = solve_system(M05, Specialization.random(M05, 2), SolveOptions(gamma_check=True))
    assert len(rep.points) == 2
    assert rep.paths == 9  # two cleared cubics


def test_euler_characteristic_trials():
    assert euler_characteristic(get_fixture("cubic").model(), trials=2) == 3
    with pytest.raises(ValueError):
        euler_characteristic(M05, trials=0)


def test_inconsistent_counts_raise(monkeypatch):
    import twistcoh.numeric.solve as solve

    real = solve.critical_points
    calls = iter([0, 1])

    def fake(model, seed, options=None):
        pts, spec = real(model, seed, options)
        return (pts[:-1] if next(calls) else pts), spec

    monkeypatch.setattr(solve, "critical_points", fake)
    with pytest.raises(SolverError):
        solve.euler_characteristic(M05, trials=2)


@settings(max_examples=15)
@given(st.lists(st.integers(-6, 6), min_size=3, max_size=6), st.integers(0, 1000))
def test_univariate_vieta(coeffs, seed):
    """For one variable the critical points are all roots of nu f - s x f'."""
    assume(coeffs[0] != 0 and coeffs[-1] != 0)
    x = sympy.Symbol("x")
    f = sum(c * x**k for k, c in enumerate(coeffs))
    assume(sympy.discriminant(f, x) != 0)
    text = " + ".join(f"({c})*x^{k}" for k, c in enumerate(coeffs) if c)
    model = ModelSpec.from_strings([text], ["x"])
    pts, spec = critical_points(model, seed)
    assert len(pts) == len(coeffs) - 1
    assert vieta_error(model, pts, spec) < 1e-8


def test_vieta_needs_one_variable():
    pts, spec = critical_points(M05, 0)
    with pytest.raises(ValueError):
        vieta_error(M05, pts, spec)


def test_laurent_model():
    # negative exponents are cleared before tracking
    model = ModelSpec.from_strings(["x + 1/x - 3"], ["x"])
    assert len(critical_points(model, 0)[0]) == 2
    assert LaurentPoly.gen(("x",), 0).n == 1
