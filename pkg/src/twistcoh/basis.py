"""Choice of a monomial basis of the likelihood quotient from numerical critical points.

A set of functions ``f^-a x^b`` represents a basis exactly when its
evaluation matrix at the critical points of a generic specialization is
invertible.  Candidates are accepted greedily in pool order whenever they
increase the numerical rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diffring import Mono, format_monomial
from .numeric.solve import CriticalPoint, SolveOptions, critical_points
from .numeric.system import LikelihoodEvaluator, Specialization
from .symbolic.model import ModelSpec


class PoolExhausted(RuntimeError):
    """Fewer than chi independent candidates in the pool."""

    def __init__(self, found: int, chi: int, degree: int):
        self.found, self.chi, self.degree = found, chi, degree
        super().__init__(f"only {found} of {chi} basis elements found with degree bound {degree}")


def _pool_key(m: Mono, ell: int) -> tuple:
    a, b = m[:ell], m[ell:]
    return (sum(a) + sum(b), sum(a), tuple(-x for x in b), tuple(-x for x in a))


@dataclass(frozen=True)
class CandidatePool:
    """All ``f^-a x^b`` with ``a, b >= 0`` and ``|a| + |b| <= degree``.

    Ordered by total degree, then x-monomials before inverse powers of f,
    then lexicographically with earlier variables first.
    """

    ell: int
    n: int
    degree: int

    @property
    def monomials(self) -> list[Mono]:
        size = self.ell + self.n
        out = []

        def rec(prefix, remaining, slots):
            if slots == 0:
                out.append(tuple(prefix))
                return
            for e in range(remaining + 1):
                rec(prefix + [e], remaining - e, slots - 1)

        rec([], self.degree, size)
        return sorted(out, key=lambda m: _pool_key(m, self.ell))

    def __len__(self) -> int:
        return len(self.monomials)


def evaluate_monomial(m: Mono, x: np.ndarray, model: ModelSpec,
                      f_values: np.ndarray | None = None) -> complex:
    """Value of ``prod f_i^-a_i prod x_j^b_j`` at ``x``."""
    ell = model.ell
    a, b = m[:ell], m[ell:]
    x = np.asarray(x, dtype=complex)
    if f_values is None and any(a):
        f_values = np.array([p.compile()(x) for p in model.f], dtype=complex)
    val = complex(1)
    for i, e in enumerate(a):
        if e:
            val *= f_values[i] ** (-e)
    for j, e in enumerate(b):
        if e:
            val *= x[j] ** e
    return val


def evaluation_rows(monos: Sequence[Mono], points: Sequence[CriticalPoint], model: ModelSpec,
                    spec: Specialization) -> np.ndarray:
    ev = LikelihoodEvaluator(model, spec)
    fvals = [ev.f_values(p.x) for p in points]
    return np.array([[evaluate_monomial(m, p.x, model, fv) for p, fv in zip(points, fvals)]
                     for m in monos], dtype=complex)


@dataclass
class EvaluationMatrix:
    """Rows: selected monomials; columns: critical points."""

    monomials: list[Mono]
    values: np.ndarray
    eta: np.ndarray

    @property
    def normalized(self) -> np.ndarray:
        return self.values / np.sqrt(self.eta)[None, :]

    def smallest_singular_value(self) -> float:
        return float(np.linalg.svd(self.normalized, compute_uv=False)[-1])


def select_basis(model: ModelSpec, pool: CandidatePool | Sequence[Mono], points: Sequence[CriticalPoint],
                 spec: Specialization, tol: float = 1e-8) -> tuple[list[Mono], EvaluationMatrix]:
    """Greedy maximal independent subset of the pool modulo the likelihood ideal.

    Raises:
        PoolExhausted: fewer than ``len(points)`` elements were found.
    """
    chi = len(points)
    monos = pool.monomials if isinstance(pool, CandidatePool) else [tuple(m) for m in pool]
    ev = LikelihoodEvaluator(model, spec)
    fvals = [ev.f_values(p.x) for p in points]
    chosen: list[Mono] = []
    rows: list[np.ndarray] = []
    Q = np.zeros((0, chi), dtype=complex)
    for m in monos:
        if len(chosen) == chi:
            break
        v = np.array([evaluate_monomial(m, p.x, model, fv) for p, fv in zip(points, fvals)])
        norm = np.linalg.norm(v)
        if not np.isfinite(norm) or norm == 0:
            continue
        r = v - Q.T @ (Q.conj() @ v)
        r = r - Q.T @ (Q.conj() @ r)  # second pass for stability
        if np.linalg.norm(r) > tol * norm:
            chosen.append(m)
            rows.append(v)
            Q = np.vstack([Q, (r / np.linalg.norm(r))[None, :]])
    degree = pool.degree if isinstance(pool, CandidatePool) else -1
    if len(chosen) < chi:
        raise PoolExhausted(len(chosen), chi, degree)
    eta = np.array([p.eta for p in points], dtype=complex)
    return chosen, EvaluationMatrix(chosen, np.array(rows), eta)


def find_basis(model: ModelSpec, degree: int = 3, seed: int = 0, max_degree: int = 12,
               options: SolveOptions | None = None, tol: float = 1e-8) -> list[Mono]:
    """Solve at a generic point and select a basis, raising the degree bound as needed."""
    points, spec = critical_points(model, seed, options)
    d = degree
    while True:
        try:
            basis, _ = select_basis(model, CandidatePool(model.ell, model.n, d), points, spec, tol)
            return basis
        except PoolExhausted:
            if d >= max_degree:
                raise
            d += 1


def format_basis(basis: Sequence[Mono], ell: int) -> list[str]:
    return [format_monomial(b, ell) for b in basis]
