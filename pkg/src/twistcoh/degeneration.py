"""The delta -> 0 limit of the contiguity matrices and the residue pairing.

Scaling all parameters by ``1/delta`` and letting ``delta -> 0`` turns the
shift action into multiplication on the likelihood quotient:
``sigma_{nu_j}`` becomes multiplication by ``x_j`` and ``sigma_{s_i}``
multiplication by ``1/f_i``.  With the row convention of the contiguity
matrices, the multiplication matrix acting on coordinate columns is the
transpose of the delta = 0 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Mapping, Sequence

import numpy as np

from .basis import evaluate_monomial
from .contiguity import ContiguitySet
from .diffring import Mono
from .linalg import SqMat, mat_identity, mat_mul, mat_specialize, transpose
from .numeric.solve import CriticalPoint
from .numeric.system import LikelihoodEvaluator, Specialization
from .symbolic.laurent import LaurentPoly
from .symbolic.ratfun import RatFun


class DegenerationPole(ArithmeticError):
    """An entry of the scaled contiguity matrix has a pole at delta = 0."""


class EigenMismatch(AssertionError):
    """Specialized eigenvalues do not match critical-point values."""


def delta_limit(r: RatFun, delta: str = "delta") -> RatFun:
    """``r(theta/delta)`` at ``delta = 0``; raises :class:`DegenerationPole` on a pole."""
    scaled = r.substitute_scaled(delta)
    try:
        return scaled.substitute(delta, 0)
    except ZeroDivisionError as exc:
        raise DegenerationPole(f"entry {r} has a pole at delta = 0") from exc


def generator_labels(cs: ContiguitySet) -> list[str]:
    """Names of the multiplication generators, one per direction (s first)."""
    model = cs.model
    if model.ell == 1:
        finv = ["1/f"]
    else:
        finv = [f"1/f{i + 1}" for i in range(model.ell)]
    return finv + list(model.vars)


@dataclass
class MultiplicationSet:
    """Multiplication matrices on the likelihood quotient, acting on coordinate columns."""

    cs: ContiguitySet
    matrices: dict[str, SqMat]
    limits: dict[str, SqMat]

    @property
    def basis(self) -> list[Mono]:
        return self.cs.basis

    @property
    def model(self):
        return self.cs.model

    def by_direction(self, d: int) -> SqMat:
        return self.matrices[generator_labels(self.cs)[d]]

    def specialized(self, spec: Specialization) -> dict[str, np.ndarray]:
        vals = spec.ring_values(self.model)
        return {k: mat_specialize(v, vals) for k, v in self.matrices.items()}

    def monomial_matrix(self, m: Mono) -> SqMat:
        """Exact multiplication matrix of ``f^-a x^b`` (a, b >= 0)."""
        if any(e < 0 for e in m):
            raise ValueError("negative exponents need inverse matrices; use numeric_monomial")
        ring = self.model.ring
        M = mat_identity(ring, self.cs.chi)
        for d, e in enumerate(m):
            for _ in range(e):
                M = mat_mul(self.by_direction(d), M)
        return M


def multiplication_matrices(cs: ContiguitySet) -> MultiplicationSet:
    """Multiplication by 1/f_i and x_j from the delta -> 0 limit of the contiguity matrices."""
    labels = generator_labels(cs)
    mats = {}
    limits = {}
    for d, name in enumerate(cs.model.param_names):
        C0 = [[delta_limit(v) for v in row] for row in cs.matrix(name)]
        limits[labels[d]] = C0
        mats[labels[d]] = transpose(C0)
    return MultiplicationSet(cs, mats, limits)


def commute_exactly(ms: MultiplicationSet) -> bool:
    keys = list(ms.matrices)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            A, B = ms.matrices[a], ms.matrices[b]
            if mat_mul(A, B) != mat_mul(B, A):
                return False
    return True


def polynomial_in_matrices(p: LaurentPoly, Mx: Sequence[SqMat]) -> SqMat:
    """Exact ``p(M_x1, ..., M_xn)`` for a polynomial ``p`` (no negative exponents)."""
    ring = Mx[0][0][0].ring
    chi = len(Mx[0])
    acc = [[RatFun.zero(ring)] * chi for _ in range(chi)]
    for e, c in p.terms.items():
        if any(k < 0 for k in e):
            raise ValueError("negative exponent in polynomial_in_matrices")
        T = mat_identity(ring, chi)
        for j, k in enumerate(e):
            for _ in range(k):
                T = mat_mul(Mx[j], T)
        cc = RatFun.constant(ring, c)
        acc = [[a + cc * t for a, t in zip(ra, rt)] for ra, rt in zip(acc, T)]
    return acc


def inverse_consistency(ms: MultiplicationSet) -> bool:
    """``M_{1/f_i} * f_i(M_x) == I`` exactly for polynomial f_i."""
    model = ms.model
    labels = generator_labels(ms.cs)
    Mx = [ms.matrices[v] for v in model.vars]
    ident = mat_identity(model.ring, ms.cs.chi)
    for i, f in enumerate(model.f):
        lo, _ = f.degree_bounds()
        if any(k < 0 for k in lo):
            continue
        if mat_mul(ms.matrices[labels[i]], polynomial_in_matrices(f, Mx)) != ident:
            return False
    return True


# ---------------------------------------------------------------------------
# numeric checks


class NumericAlgebra:
    """Specialized multiplication matrices with Laurent evaluation helpers."""

    def __init__(self, ms: MultiplicationSet, spec: Specialization):
        self.ms = ms
        self.spec = spec
        self.model = ms.model
        num = ms.specialized(spec)
        labels = generator_labels(ms.cs)
        self.finv = [num[labels[i]] for i in range(self.model.ell)]
        self.x = [num[v] for v in self.model.vars]
        self.chi = ms.cs.chi
        self._xinv = None

    @property
    def xinv(self):
        if self._xinv is None:
            self._xinv = [np.linalg.inv(m) for m in self.x]
        return self._xinv

    def _power(self, mats, invs, e):
        out = np.eye(self.chi, dtype=complex)
        for j, k in enumerate(e):
            if k > 0:
                out = out @ np.linalg.matrix_power(mats[j], k)
            elif k < 0:
                out = out @ np.linalg.matrix_power(invs()[j], -k)
        return out

    def laurent(self, p: LaurentPoly) -> np.ndarray:
        out = np.zeros((self.chi, self.chi), dtype=complex)
        for e, c in p.terms.items():
            out += complex(c) * self._power(self.x, lambda: self.xinv, e)
        return out

    def monomial(self, m: Mono) -> np.ndarray:
        ell = self.model.ell
        a, b = m[:ell], m[ell:]
        out = np.eye(self.chi, dtype=complex)
        for i, k in enumerate(a):
            if k > 0:
                out = out @ np.linalg.matrix_power(self.finv[i], k)
            elif k < 0:
                out = out @ np.linalg.matrix_power(np.linalg.inv(self.finv[i]), -k)
        return out @ self._power(self.x, lambda: self.xinv, b)

    def combination(self, terms: Mapping[Mono, complex]) -> np.ndarray:
        out = np.zeros((self.chi, self.chi), dtype=complex)
        for m, c in terms.items():
            out += complex(c) * self.monomial(tuple(m))
        return out

    def hessian(self) -> np.ndarray:
        """``Hess(M)``: the Hessian determinant of log L with x and 1/f replaced by matrices."""
        model = self.model
        n, ell = model.n, model.ell
        s = np.array(self.spec.s)
        nu = np.array(self.spec.nu)
        I = np.eye(self.chi, dtype=complex)
        grads = [[self.laurent(model.df[i][j]) for j in range(n)] for i in range(ell)]
        H = [[np.zeros((self.chi, self.chi), dtype=complex) for _ in range(n)] for _ in range(n)]
        for j in range(n):
            H[j][j] = H[j][j] - nu[j] * self.xinv[j] @ self.xinv[j]
            for k in range(n):
                for i in range(ell):
                    ddf = self.laurent(model.df[i][j].derivative(k))
                    fi = self.finv[i]
                    H[j][k] = H[j][k] - s[i] * (ddf @ fi - grads[i][j] @ grads[i][k] @ fi @ fi)
        # Leibniz expansion; the entries commute
        det = np.zeros((self.chi, self.chi), dtype=complex)
        for perm in permutations(range(n)):
            sign = _perm_sign(perm)
            T = I
            for r, c in enumerate(perm):
                T = T @ H[r][c]
            det += sign * T
        return det


def _perm_sign(perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


@dataclass
class EigenReport:
    max_mismatch: float
    per_generator: dict[str, float]
    eigenvector_error: float


def _greedy_match(eigs: np.ndarray, targets: np.ndarray) -> float:
    remaining = list(range(len(targets)))
    worst = 0.0
    for ev in sorted(eigs, key=lambda z: (z.real, z.imag)):
        dists = [abs(ev - targets[k]) / max(1.0, abs(targets[k])) for k in remaining]
        k = int(np.argmin(dists))
        worst = max(worst, dists[k])
        remaining.pop(k)
    return worst


def eigen_check(ms: MultiplicationSet, points: Sequence[CriticalPoint], spec: Specialization,
                tol: float = 1e-6, raise_on_fail: bool = True) -> EigenReport:
    """Compare specialized eigenvalues with x_j and 1/f_i at the critical points."""
    model = ms.model
    num = ms.specialized(spec)
    labels = generator_labels(ms.cs)
    ev = LikelihoodEvaluator(model, spec)
    per = {}
    vecerr = 0.0
    vecs = []
    for p in points:
        fv = ev.f_values(p.x)
        v = np.array([evaluate_monomial(b, p.x, model, fv) for b in ms.basis])
        vecs.append((v, fv, p.x))
    for d, lab in enumerate(labels):
        M = num[lab]
        if d < model.ell:
            targets = np.array([1 / fv[d] for _, fv, _ in vecs])
        else:
            targets = np.array([x[d - model.ell] for _, _, x in vecs])
        eigs = np.linalg.eigvals(M)
        per[lab] = _greedy_match(eigs, targets)
        for (v, _, _), g in zip(vecs, targets):
            # evaluation functionals are eigenvectors of the transpose
            r = np.linalg.norm(M.T @ v - g * v) / max(1.0, np.linalg.norm(g * v))
            vecerr = max(vecerr, r)
    worst = max(per.values()) if per else 0.0
    rep = EigenReport(worst, per, vecerr)
    if raise_on_fail and (worst > tol or vecerr > tol):
        raise EigenMismatch(f"eigenvalue mismatch {worst:.3g}, eigenvector error {vecerr:.3g}")
    return rep


@dataclass
class ResiduePairing:
    trace_value: complex
    direct_value: complex
    magnitude: float = 0.0

    @property
    def relative_error(self) -> float:
        """Discrepancy relative to the size of the summed terms.

        Symmetric models often make the pairing cancel to exactly zero, so
        the scale is ``sum_j |g h / eta_j|`` rather than the result itself.
        """
        scale = max(abs(self.direct_value), abs(self.trace_value), self.magnitude, 1e-300)
        return abs(self.trace_value - self.direct_value) / scale


def residue_pairing(g: Mapping[Mono, complex] | Mono, h: Mapping[Mono, complex] | Mono,
                    ms: MultiplicationSet, points: Sequence[CriticalPoint], spec: Specialization,
                    algebra: NumericAlgebra | None = None) -> ResiduePairing:
    """The residue pairing of g and h by the trace formula and by summing over critical points."""
    g = {tuple(g): 1} if not isinstance(g, Mapping) else g
    h = {tuple(h): 1} if not isinstance(h, Mapping) else h
    alg = algebra or NumericAlgebra(ms, spec)
    Mg = alg.combination(g)
    Mh = alg.combination(h)
    MH = alg.hessian()
    try:
        trace = complex(np.trace(Mg @ Mh @ np.linalg.inv(MH)))
    except np.linalg.LinAlgError as exc:
        raise ZeroDivisionError("Hessian matrix is singular at this specialization") from exc
    model = ms.model
    ev = LikelihoodEvaluator(model, spec)
    direct = 0j
    magnitude = 0.0
    for p in points:
        fv = ev.f_values(p.x)
        gv = sum(complex(c) * evaluate_monomial(m, p.x, model, fv) for m, c in g.items())
        hv = sum(complex(c) * evaluate_monomial(m, p.x, model, fv) for m, c in h.items())
        direct += gv * hv / p.eta
        magnitude += abs(gv * hv / p.eta)
    return ResiduePairing(trace, direct, magnitude)


def characteristic_polynomial(M: SqMat) -> list[RatFun]:
    """Coefficients of ``det(lambda I - M)`` from ``lambda^n`` down (Faddeev-LeVerrier)."""
    n = len(M)
    ring = M[0][0].ring
    ident = mat_identity(ring, n)
    coeffs = [RatFun.one(ring)]
    Mk = [[RatFun.zero(ring)] * n for _ in range(n)]
    for k in range(1, n + 1):
        Mk = mat_mul(M, Mk)
        Mk = [[a + coeffs[-1] * b for a, b in zip(ra, rb)] for ra, rb in zip(Mk, ident)]
        AM = mat_mul(M, Mk)
        tr = RatFun.zero(ring)
        for i in range(n):
            tr = tr + AM[i][i]
        coeffs.append(-tr / k)
    return coeffs
