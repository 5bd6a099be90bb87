"""End-to-end acceptance checks over the reference fixtures.

Each check returns a :class:`CriterionResult`; :func:`run_all` runs them in
order.  Results computed for one check (bases, contiguity sets, critical
points) are cached in a :class:`Workspace` and reused by later checks.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import find_basis
from .contiguity import ContiguitySet, contiguity_matrices, expand_form, verify_twisted_commutation
from .degeneration import (
    MultiplicationSet,
    NumericAlgebra,
    characteristic_polynomial,
    commute_exactly,
    eigen_check,
    multiplication_matrices,
    residue_pairing,
)
from .diffring import Mono
from .fixtures import (
    CHI_FIXTURES,
    CONTIGUITY_FIXTURES,
    CUBIC_C,
    CUBIC_RELATION_COLUMNS,
    CUBIC_RELATIONS,
    LINE_FORM,
    LINE_FORM_COEFF,
    M05_C,
    get_fixture,
)
from .linalg import MatK, row_space_equal
from .numeric.solve import CriticalPoint, SolveOptions, critical_points
from .numeric.system import LikelihoodEvaluator, Specialization, clear_denominators
from .symbolic import parse_laurent, parse_ratfun
from .symbolic.model import ModelSpec
from .symbolic.ratfun import RatFun

SEEDS = (0, 1, 2)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} [{self.number:2d}] {self.title} ({self.seconds:.2f}s) {self.detail}".rstrip()


@dataclass
class Workspace:
    """Cache of per-fixture results shared between checks."""

    options: SolveOptions = field(default_factory=SolveOptions)
    _models: dict[str, ModelSpec] = field(default_factory=dict)
    _cs: dict[str, ContiguitySet] = field(default_factory=dict)
    _ms: dict[str, MultiplicationSet] = field(default_factory=dict)
    _points: dict[tuple[str, int], tuple[list[CriticalPoint], Specialization]] = field(
        default_factory=dict)

    def model(self, name: str) -> ModelSpec:
        if name not in self._models:
            self._models[name] = get_fixture(name).model()
        return self._models[name]

    def points(self, name: str, seed: int) -> tuple[list[CriticalPoint], Specialization]:
        key = (name, seed)
        if key not in self._points:
            self._points[key] = critical_points(self.model(name), seed, self.options)
        return self._points[key]

    def basis(self, name: str) -> list[Mono]:
        fx = get_fixture(name)
        ref = fx.basis_monomials()
        if ref is not None:
            return ref
        return find_basis(self.model(name), options=self.options)

    def contiguity(self, name: str) -> ContiguitySet:
        if name not in self._cs:
            self._cs[name] = contiguity_matrices(self.model(name), self.basis(name))
        return self._cs[name]

    def multiplication(self, name: str) -> MultiplicationSet:
        if name not in self._ms:
            self._ms[name] = multiplication_matrices(self.contiguity(name))
        return self._ms[name]


def _parse_matrix(rows, model: ModelSpec) -> list[list[RatFun]]:
    return [[parse_ratfun(e, model.ring) for e in row] for row in rows]


def _matrix_mismatches(got, want) -> list[str]:
    bad = []
    for r, (gr, wr) in enumerate(zip(got, want)):
        for c, (g, w) in enumerate(zip(gr, wr)):
            if g != w or str(g) != str(w):
                bad.append(f"({r},{c}): got {g}, want {w}")
    if len(got) != len(want):
        bad.append(f"size {len(got)} vs {len(want)}")
    return bad


# ---------------------------------------------------------------------------
# criteria


def check_cubic_matrices(ws: Workspace) -> tuple[bool, str]:
    cs = ws.contiguity("cubic")
    model = cs.model
    bad = []
    for name, rows in CUBIC_C.items():
        bad += [f"C_{name}{m}" for m in _matrix_mismatches(cs.matrix(name), _parse_matrix(rows, model))]
    ok = not bad and (cs.k, cs.q_star) == (1, 2)
    return ok, f"(k, q*) = ({cs.k}, {cs.q_star})" + ("; " + "; ".join(bad) if bad else "")


def check_m05_matrices(ws: Workspace) -> tuple[bool, str]:
    cs = ws.contiguity("m05")
    model = cs.model
    bad = []
    for name, rows in M05_C.items():
        bad += [f"C_{name}{m}" for m in _matrix_mismatches(cs.matrix(name), _parse_matrix(rows, model))]
    pts, _ = ws.points("m05", 0)
    ok = not bad and len(pts) == 2 and cs.chi == 2
    return ok, f"chi = {len(pts)}" + ("; " + "; ".join(bad) if bad else "")


def check_cubic_relations(ws: Workspace) -> tuple[bool, str]:
    cs = ws.contiguity("cubic")
    ring = cs.model.ring
    rel = cs.relations
    if set(rel.col_labels) != set(CUBIC_RELATION_COLUMNS):
        return False, f"column sets differ: {rel.col_labels}"
    got = rel.columns(CUBIC_RELATION_COLUMNS)
    want = MatK.from_strings(ring, CUBIC_RELATIONS, CUBIC_RELATION_COLUMNS)
    rk = len(got.rows)
    same = row_space_equal(got, want)
    return rk == 5 and same, f"rank {rk}, row space equal: {same}"


def check_euler_characteristics(ws: Workspace) -> tuple[bool, str]:
    bad = []
    for name in CHI_FIXTURES:
        counts = [len(ws.points(name, s)[0]) for s in SEEDS]
        want = get_fixture(name).chi
        if any(c != want for c in counts):
            bad.append(f"{name}: {counts} (want {want})")
    return not bad, "; ".join(bad) or f"{len(CHI_FIXTURES)} models x {len(SEEDS)} seeds"


def check_stabilization(ws: Workspace) -> tuple[bool, str]:
    parts, ok = [], True
    for name in ["product_surface", "bubble", "triangle"]:
        fx = get_fixture(name)
        cs = ws.contiguity(name)
        final = cs.trace[-1].rank if cs.trace else None
        good = (cs.k, cs.q_star) == (fx.k, fx.q_star)
        if fx.final_rank is not None:
            good &= final == fx.final_rank
        if fx.rank_k1 is not None:
            k1 = [st.rank for st in cs.trace if st.k == 1]
            good &= bool(k1) and max(k1) == fx.rank_k1
        ok &= good
        parts.append(f"{name}: k={cs.k} q*={cs.q_star} rank={final}")
    return ok, "; ".join(parts)


def check_line_expansion(ws: Workspace) -> tuple[bool, str]:
    cs = ws.contiguity("line")
    model = cs.model
    got = expand_form(parse_laurent(LINE_FORM, model.vars), cs)
    want = parse_ratfun(LINE_FORM_COEFF, model.ring)
    ok = len(got) == 1 and got[0] == want and str(got[0]) == str(want)
    return ok, f"got {got[0]}"


def perturbed(cs: ContiguitySet, direction: str, r: int = 0, c: int = 0) -> ContiguitySet:
    """Copy of ``cs`` with one entry of one matrix changed by adding 1."""
    mats = {k: [list(row) for row in v] for k, v in cs.matrices.items()}
    mats[direction][r][c] = mats[direction][r][c] + RatFun.one(cs.model.ring)
    return ContiguitySet(cs.model, cs.basis, mats, cs.k, cs.q_star, cs.trace, cs.E, cs.relations)


def check_twisted_commutation(ws: Workspace) -> tuple[bool, str]:
    bad = []
    for name in CONTIGUITY_FIXTURES:
        cs = ws.contiguity(name)
        if not verify_twisted_commutation(cs):
            bad.append(f"{name} fails")
        if len(cs.directions) > 1 and verify_twisted_commutation(perturbed(cs, cs.directions[-1])):
            bad.append(f"{name} perturbation undetected")
    return not bad, "; ".join(bad) or f"{len(CONTIGUITY_FIXTURES)} fixtures"


def check_degeneration(ws: Workspace) -> tuple[bool, str]:
    bad = []
    ms = ws.multiplication("cubic")
    model = ms.model
    cp = characteristic_polynomial(ms.matrices["x"])
    want = [RatFun.one(model.ring), RatFun.zero(model.ring), RatFun.zero(model.ring),
            -parse_ratfun("nu/(nu-3*s)", model.ring)]
    if cp != want:
        bad.append(f"cubic charpoly {[str(c) for c in cp]}")
    worst = 0.0
    for name in CONTIGUITY_FIXTURES:
        ms = ws.multiplication(name)
        if not commute_exactly(ms):
            bad.append(f"{name} matrices do not commute")
        pts, spec = ws.points(name, 0)
        rep = eigen_check(ms, pts, spec, raise_on_fail=False)
        worst = max(worst, rep.max_mismatch, rep.eigenvector_error)
        if rep.max_mismatch > 1e-6 or rep.eigenvector_error > 1e-6:
            bad.append(f"{name} eigen error {max(rep.max_mismatch, rep.eigenvector_error):.2g}")
    return not bad, "; ".join(bad) or f"max eigen error {worst:.2g}"


def check_residue_pairing(ws: Workspace, pairs: int = 10) -> tuple[bool, str]:
    worst, bad = 0.0, []
    for name in CONTIGUITY_FIXTURES:
        ms = ws.multiplication(name)
        pts, spec = ws.points(name, 0)
        alg = NumericAlgebra(ms, spec)
        size = ms.model.ell + ms.model.n
        rng = random.Random(name)
        for _ in range(pairs):
            g = tuple(rng.randint(0, 2) for _ in range(size))
            h = tuple(rng.randint(0, 2) for _ in range(size))
            err = residue_pairing(g, h, ms, pts, spec, alg).relative_error
            worst = max(worst, err)
            if err > 1e-6:
                bad.append(f"{name} {g},{h}: {err:.2g}")
    return not bad, "; ".join(bad) or f"max relative error {worst:.2g}"


def vieta_error(model: ModelSpec, points: list[CriticalPoint], spec: Specialization) -> float:
    """Relative mismatch between the cleared univariate equation and the roots found."""
    if model.n != 1:
        raise ValueError("Vieta check needs one variable")
    eq = clear_denominators(model, spec).equations[0]
    deg = max(e[0] for e in eq)
    coeffs = np.zeros(deg + 1, dtype=complex)
    for e, c in eq.items():
        coeffs[deg - e[0]] = c
    if len(points) != deg:
        return float("inf")
    from_roots = coeffs[0] * np.poly([p.coordinates[0] for p in points])
    return float(np.max(np.abs(from_roots - coeffs)) / np.max(np.abs(coeffs)))


def check_solver_soundness(ws: Workspace) -> tuple[bool, str]:
    bad = []
    worst_clear = worst_omega = worst_vieta = 0.0
    for name in CHI_FIXTURES:
        model = ws.model(name)
        counts = set()
        for seed in SEEDS:
            pts, spec = ws.points(name, seed)
            counts.add(len(pts))
            F = clear_denominators(model, spec).compile()
            ev = LikelihoodEvaluator(model, spec)
            for p in pts:
                rc = float(np.max(np.abs(F(p.x)) / np.maximum(F.term_scale(p.x), 1.0)))
                ro = float(np.max(np.abs(ev.omega(p.x))))
                worst_clear, worst_omega = max(worst_clear, rc), max(worst_omega, ro)
                if rc >= 1e-10 or ro >= 1e-8:
                    bad.append(f"{name} seed {seed}: residuals {rc:.2g}, {ro:.2g}")
        if len(counts) != 1:
            bad.append(f"{name}: counts {sorted(counts)}")
    for name in ["line", "cubic"]:
        for seed in SEEDS:
            pts, spec = ws.points(name, seed)
            err = vieta_error(ws.model(name), pts, spec)
            worst_vieta = max(worst_vieta, err)
            if err > 1e-8:
                bad.append(f"{name} seed {seed}: Vieta {err:.2g}")
    detail = f"cleared {worst_clear:.2g}, omega {worst_omega:.2g}, Vieta {worst_vieta:.2g}"
    return not bad, "; ".join(bad) or detail


CRITERIA: list[tuple[int, str, Callable[[Workspace], tuple[bool, str]]]] = [
    (1, "cubic contiguity matrices", check_cubic_matrices),
    (2, "M05 contiguity matrices and chi", check_m05_matrices),
    (3, "cubic relation matrix", check_cubic_relations),
    (4, "Euler characteristics over 3 seeds", check_euler_characteristics),
    (5, "stabilization parameters", check_stabilization),
    (6, "expansion of a top form", check_line_expansion),
    (7, "twisted commutation", check_twisted_commutation),
    (8, "degeneration to multiplication", check_degeneration),
    (9, "residue pairing trace formula", check_residue_pairing),
    (10, "solver soundness", check_solver_soundness),
]


def run_criterion(number: int, ws: Workspace | None = None) -> CriterionResult:
    ws = ws or Workspace()
    for num, title, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                ok, detail = fn(ws)
            except Exception as exc:  # reported as a failure, not a crash
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            return CriterionResult(num, title, ok, detail, time.perf_counter() - t0)
    raise KeyError(f"no criterion {number}")


def run_all(ws: Workspace | None = None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    ws = ws or Workspace()
    out = []
    for num, _, _ in CRITERIA:
        res = run_criterion(num, ws)
        if echo:
            echo(res.line())
        out.append(res)
    return out
