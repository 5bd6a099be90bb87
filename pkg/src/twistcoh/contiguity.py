"""Contiguity matrices: the action of the shift operators on a cohomology basis.

For a basis ``B`` of R/J the engine computes the relations in
``J ∩ span_K(E)``, where ``E`` holds B, its forward shifts and the
supports of the ideal generators.  Starting from the generators it
repeatedly enlarges the span by all shifts ``sigma^u`` with ``|u|_1 <= k``
and cuts back to ``span_K(E)`` until the dimension stops growing, raising
``k`` when that plateau falls short of ``|E \\ B|``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from .diffring import (
    DiffElement,
    Mono,
    build_E,
    format_monomial,
    j_generators,
    mono_add,
    shift_ball,
    unit,
)
from .linalg import (
    Eliminator,
    MatK,
    Row,
    SingularPivotBlock,
    SqMat,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_shift,
    rref_rows,
)
from .symbolic.laurent import LaurentPoly
from .symbolic.model import ModelSpec
from .symbolic.ratfun import RatFun


class ContiguityError(RuntimeError):
    """The plus-closure iteration did not reach full rank within the configured limits."""

    def __init__(self, message: str, trace: list | None = None):
        self.trace = trace or []
        super().__init__(message)


@dataclass(frozen=True)
class RankStep:
    k: int
    q: int
    rank: int
    rows: int
    columns: int
    seconds: float


@dataclass
class ContiguitySet:
    """Contiguity matrices for every shift direction, labelled by a basis.

    ``matrices[name][r][c]`` is the coefficient of ``beta_c`` in
    ``sigma_name * beta_r`` modulo J, where names are the parameter names
    of the model (``s``, ``nu`` or ``s1``, ``nu2``, ...).
    """

    model: ModelSpec
    basis: list[Mono]
    matrices: dict[str, SqMat]
    k: int
    q_star: int
    trace: list[RankStep] = field(default_factory=list)
    E: list[Mono] = field(default_factory=list)
    relations: MatK | None = None

    @property
    def chi(self) -> int:
        return len(self.basis)

    @property
    def directions(self) -> tuple[str, ...]:
        return self.model.param_names

    def matrix(self, direction: str | int) -> SqMat:
        if isinstance(direction, int):
            direction = self.model.param_names[direction]
        return self.matrices[direction]

    def basis_labels(self) -> list[str]:
        return [format_monomial(b, self.model.ell) for b in self.basis]

    def to_matk(self, direction: str | int) -> MatK:
        labels = self.basis_labels()
        return MatK(self.model.ring, [list(r) for r in self.matrix(direction)], labels, labels)


# ---------------------------------------------------------------------------
# the (k, q) iteration


def _shift_row(row: dict[Mono, RatFun], u: Mono, ring_index: Sequence[int]) -> dict[Mono, RatFun]:
    out = {}
    for m, c in row.items():
        for d, x in enumerate(u):
            if x:
                c = c.shift(ring_index[d], x)
        out[mono_add(m, u)] = c
    return out


def intersect_with_E(rows: Sequence[dict[Mono, RatFun]], E: Sequence[Mono], k: int,
                     ring_index: Sequence[int]) -> tuple[list[Row], int, int]:
    """Generators of ``span(rows)^[k] ∩ span_K(E)`` as sparse rows over E.

    The columns outside E are eliminated first; the rows left without any
    outside entry span the intersection (this is the product of a
    cokernel of the outside block with the E block).  Returns the residual
    rows plus the size of the enlarged matrix.
    """
    size = len(E[0])
    e_index = {m: j for j, m in enumerate(E)}
    col_index = dict(e_index)
    nE = len(E)
    shifted = []
    for r in rows:
        for u in shift_ball(size, k):
            sr = _shift_row(r, u, ring_index)
            out = {}
            for m, c in sr.items():
                j = col_index.get(m)
                if j is None:
                    j = len(col_index)
                    col_index[m] = j
                out[j] = c
            shifted.append(out)
    # cheap rows first: they make better pivots
    shifted.sort(key=lambda r: (sum(v.complexity()[0] for v in r.values()), len(r)))
    el = Eliminator(allowed=lambda c: c >= nE)
    residual = []
    for r in shifted:
        kind, red = el.add(r)
        if kind == "residual":
            residual.append(red)
    return residual, len(shifted), len(col_index)


def _relations_rref(rows: Sequence[Row], nE: int) -> dict[int, Row]:
    # E lists E\B first, so column index order is the required pivot priority
    return rref_rows(rows, {j: j for j in range(nE)})


def contiguity_matrices(
    model: ModelSpec,
    B: Sequence[Mono],
    k_max: int = 4,
    q_max: int = 12,
    generators: Sequence[DiffElement] | None = None,
    verbose: bool = False,
) -> ContiguitySet:
    """Contiguity matrices of all l + n directions with respect to ``B``.

    Args:
        model: the model.
        B: basis monomials (flat tuples), e.g. from :func:`select_basis`.
        k_max: largest shift radius tried.
        q_max: largest number of enlarge-and-intersect rounds per radius.
        generators: generators of J to start from; defaults to
            :func:`j_generators` with inverse shifts cleared.

    Raises:
        ContiguityError: full rank not reached within ``k_max``/``q_max``.
        SingularPivotBlock: the relations do not determine every
            ``sigma_alpha * beta`` in terms of B (B is not a basis).
    """
    B = [tuple(b) for b in B]
    if len(set(B)) != len(B):
        raise ValueError("basis has repeated monomials")
    gens = list(generators) if generators is not None else j_generators(model, clear_inverse=True)
    E = build_E(B, gens)
    nE = len(E)
    target = nE - len(B)
    e_index = {m: j for j, m in enumerate(E)}
    ring_index = model.direction_ring_index
    trace: list[RankStep] = []

    start = []
    for g in gens:
        row = {}
        for m, c in g.terms.items():
            if m not in e_index:
                raise ValueError(f"generator monomial {format_monomial(m, model.ell)} not in E")
            row[e_index[m]] = c
        start.append(row)
    start_rref = _relations_rref(start, nE)
    rank0 = len(start_rref)

    for k in range(1, k_max + 1):
        current = start_rref
        prev_rank = rank0
        q = 0
        reached = False
        while True:
            if prev_rank == target:
                reached = True
                break
            if q >= q_max:
                raise ContiguityError(
                    f"q exceeded q_max={q_max} at k={k} (rank {prev_rank} of {target})", trace)
            q += 1
            t0 = time.perf_counter()
            rows_mono = [{E[j]: c for j, c in r.items()} for r in current.values()]
            residual, nrows, ncols = intersect_with_E(rows_mono, E, k, ring_index)
            new = _relations_rref(residual, nE)
            rk = len(new)
            trace.append(RankStep(k, q, rk, nrows, ncols, time.perf_counter() - t0))
            if verbose:
                print(f"k={k} q={q} rank={rk}/{target} rows={nrows} cols={ncols} "
                      f"{trace[-1].seconds:.2f}s")
            if rk < prev_rank:
                raise ContiguityError("rank decreased; inconsistent elimination", trace)
            if rk > target:
                raise SingularPivotBlock(
                    f"relations have rank {rk} > |E \\ B| = {target}; B is dependent modulo J")
            if rk == prev_rank:
                q -= 1
                break
            current, prev_rank = new, rk
        if reached:
            cs = _read_matrices(model, B, E, current, k, q, trace)
            return cs
    last = trace[-1].rank if trace else rank0
    raise ContiguityError(f"k exceeded k_max={k_max}; last rank {last} of {target}", trace)


def _read_matrices(model, B, E, rref: dict[int, Row], k, q, trace) -> ContiguitySet:
    nE = len(E)
    nB = len(B)
    ring = model.ring
    first_b = nE - nB
    for p in rref:
        if p >= first_b:
            raise SingularPivotBlock(
                f"relation pivots on basis monomial {format_monomial(E[p], model.ell)}")
    if len(rref) != first_b:
        raise SingularPivotBlock("relations do not cover E \\ B")
    zero, one = RatFun.zero(ring), RatFun.one(ring)
    size = model.ell + model.n
    b_index = {b: i for i, b in enumerate(B)}
    matrices = {}
    for d, name in enumerate(model.param_names):
        u = unit(size, d)
        mat = []
        for b in B:
            m = mono_add(b, u)
            if m in b_index:
                mat.append([one if c == b_index[m] else zero for c in range(nB)])
                continue
            row = rref[E.index(m)]
            # row reads m + sum c_b * b in J, so m = -sum c_b * b modulo J
            mat.append([-row[first_b + c] if (first_b + c) in row else zero for c in range(nB)])
        matrices[name] = mat
    rel = MatK.from_sparse(ring, [rref[p] for p in sorted(rref)], list(E),
                           [E[p] for p in sorted(rref)])
    return ContiguitySet(model, list(B), matrices, k, q, list(trace), list(E), rel)


# ---------------------------------------------------------------------------
# expansion of arbitrary classes and consistency checks


class ClassExpander:
    """Coordinates of ``[f^-a x^b]`` in the basis via shifted contiguity matrices.

    With ``P_u`` the matrix whose row r gives ``sigma^u * beta_r``, one has
    ``P_{u + e_d} = C_d(theta + u) P_u`` and
    ``P_{u - e_d} = C_d(theta + u - e_d)^{-1} P_u``.  Steps go through the
    s directions first, then the nu directions, in index order.
    """

    def __init__(self, cs: ContiguitySet):
        self.cs = cs
        self.model = cs.model
        self.size = self.model.ell + self.model.n
        self._shifted: dict[tuple[int, Mono], SqMat] = {}
        self._inverse: dict[tuple[int, Mono], SqMat] = {}
        self._paths: dict[Mono, SqMat] = {}

    def shifted_matrix(self, d: int, u: Mono) -> SqMat:
        key = (d, u)
        m = self._shifted.get(key)
        if m is None:
            m = mat_shift(self.cs.matrix(d), u, self.model.direction_ring_index)
            self._shifted[key] = m
        return m

    def inverse_matrix(self, d: int, u: Mono) -> SqMat:
        key = (d, u)
        m = self._inverse.get(key)
        if m is None:
            try:
                m = mat_inv(self.shifted_matrix(d, u))
            except ZeroDivisionError as exc:
                raise ZeroDivisionError(
                    f"contiguity matrix for {self.model.param_names[d]} is singular at shift {u}"
                ) from exc
            self._inverse[key] = m
        return m

    def shift_matrix(self, w: Mono) -> SqMat:
        """``P_w``: row r holds the coordinates of ``sigma^w * beta_r``."""
        w = tuple(w)
        if w in self._paths:
            return self._paths[w]
        ring = self.model.ring
        P = mat_identity(ring, self.cs.chi)
        u = [0] * self.size
        for d in range(self.size):
            step = 1 if w[d] > 0 else -1
            for _ in range(abs(w[d])):
                if step > 0:
                    P = mat_mul(self.shifted_matrix(d, tuple(u)), P)
                    u[d] += 1
                else:
                    u[d] -= 1
                    P = mat_mul(self.inverse_matrix(d, tuple(u)), P)
        self._paths[w] = P
        return P

    def monomial(self, m: Mono) -> list[RatFun]:
        """Coordinates of the class of ``sigma^m``."""
        m = tuple(m)
        basis = self.cs.basis
        best = None
        for r, b in enumerate(basis):
            w = tuple(x - y for x, y in zip(m, b))
            cost = sum(abs(x) for x in w)
            if best is None or cost < best[0]:
                best = (cost, r, w)
        _, r, w = best
        return list(self.shift_matrix(w)[r])

    def element(self, terms: dict[Mono, RatFun]) -> list[RatFun]:
        ring = self.model.ring
        acc = [RatFun.zero(ring)] * self.cs.chi
        for m, c in terms.items():
            v = self.monomial(m)
            acc = [x + c * y for x, y in zip(acc, v)]
        return acc


def expand_class(a: Sequence[int], b: Sequence[int], cs: ContiguitySet,
                 expander: ClassExpander | None = None) -> list[RatFun]:
    """Coordinates c with ``[f^-a x^b] = sum_i c_i [beta_i]``."""
    model = cs.model
    if len(a) != model.ell or len(b) != model.n:
        raise ValueError("exponent vectors have the wrong length")
    ex = expander or ClassExpander(cs)
    return ex.monomial(tuple(a) + tuple(b))


def expand_function(poly: LaurentPoly, cs: ContiguitySet) -> list[RatFun]:
    """Coordinates of the class of the function ``poly`` (times the twisted top form dx/x)."""
    ex = ClassExpander(cs)
    ring = cs.model.ring
    terms = {(0,) * cs.model.ell + e: RatFun.constant(ring, c) for e, c in poly.terms.items()}
    return ex.element(terms)


def expand_form(poly: LaurentPoly, cs: ContiguitySet) -> list[RatFun]:
    """Coordinates of the class of the top form ``poly * dx_1 ^ ... ^ dx_n``.

    Relative to the invariant volume form ``dx/x`` this is the function
    ``x_1 ... x_n * poly``.
    """
    n = cs.model.n
    return expand_function(poly.shift_exponents((1,) * n), cs)


def verify_twisted_commutation(cs: ContiguitySet) -> bool:
    """Check ``C_b(theta + e_a) C_a(theta) = C_a(theta + e_b) C_b(theta)`` for all pairs."""
    size = cs.model.ell + cs.model.n
    idx = cs.model.direction_ring_index
    for a in range(size):
        for b in range(a + 1, size):
            Ca, Cb = cs.matrix(a), cs.matrix(b)
            lhs = mat_mul(mat_shift(Cb, unit(size, a), idx), Ca)
            rhs = mat_mul(mat_shift(Ca, unit(size, b), idx), Cb)
            if lhs != rhs:
                return False
    return True
