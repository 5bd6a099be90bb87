"""Exact linear algebra over K with monomial-labelled rows and columns.

The workhorse is :class:`Eliminator`, an incremental sparse Gaussian
elimination on rows stored as ``{column: RatFun}`` dicts.  Pivots are
chosen per row as the simplest entry (smallest degree, then term count)
among the allowed columns, which keeps expression swell down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .diffring import DiffElement, Mono, format_monomial
from .symbolic.mpoly import PolyRing, _exquo, _gcd_z, _mul, _sub
from .symbolic.parser import parse_ratfun
from .symbolic.ratfun import RatFun

Row = dict  # column index -> nonzero RatFun


class SupportEscapeError(ValueError):
    """An element has a monomial outside the requested columns."""

    def __init__(self, monomial, label: str):
        self.monomial = monomial
        super().__init__(f"monomial {label} is not among the matrix columns")


class SingularPivotBlock(ArithmeticError):
    """The pivot block is singular: the proposed basis is not independent modulo J."""


# ---------------------------------------------------------------------------
# sparse row kernel


def row_axpy(target: Row, c: RatFun, src: Row, skip: int | None = None) -> None:
    """``target -= c * src`` in place (column ``skip`` is assumed to cancel)."""
    for col, v in src.items():
        if col == skip:
            continue
        t = c * v
        old = target.get(col)
        if old is None:
            target[col] = -t
        else:
            new = old - t
            if new.is_zero():
                del target[col]
            else:
                target[col] = new
    if skip is not None:
        target.pop(skip, None)


def row_scale(row: Row, c: RatFun) -> Row:
    if c.is_one():
        return row
    return {col: c * v for col, v in row.items()}


def _simplest(row: Row, allowed: Callable[[int], bool] | None, order: dict | None) -> int | None:
    best = None
    best_key = None
    for col, v in row.items():
        if allowed is not None and not allowed(col):
            continue
        key = (v.complexity(), order[col] if order else col)
        if best_key is None or key < best_key:
            best, best_key = col, key
    return best


class Eliminator:
    """Incremental echelon form: each inserted row is reduced by earlier pivots.

    Pivot rows are normalized to have coefficient 1 in their pivot column
    and zero in every earlier pivot column, so one pass over pivots in
    insertion order fully reduces a new row.

    Args:
        allowed: predicate for columns that may carry a pivot; rows whose
            reduced support has no allowed column are returned by
            :meth:`add` as "residual" rows instead of becoming pivots.
        order: optional tie-break rank for columns (lower first).
        pivot_rule: ``"simplest"`` (cheapest entry) or ``"first"`` (lowest
            order rank), the latter giving reduced row echelon form in a
            prescribed column order.
    """

    def __init__(
        self,
        allowed: Callable[[int], bool] | None = None,
        order: dict | None = None,
        pivot_rule: str = "simplest",
    ):
        self.allowed = allowed
        self.order = order
        self.pivot_rule = pivot_rule
        self.pivots: dict[int, Row] = {}
        self.pivot_order: list[int] = []

    def reduce(self, row: Row) -> Row:
        row = dict(row)
        for p in self.pivot_order:
            c = row.get(p)
            if c is not None:
                row_axpy(row, c, self.pivots[p], skip=p)
        return row

    def _choose(self, row: Row) -> int | None:
        if self.pivot_rule == "first":
            cands = [c for c in row if self.allowed is None or self.allowed(c)]
            if not cands:
                return None
            return min(cands, key=lambda c: self.order[c] if self.order else c)
        return _simplest(row, self.allowed, self.order)

    def add(self, row: Row) -> tuple[str, Row]:
        """Insert a row; returns ``("pivot", row)``, ``("residual", row)`` or ``("zero", {})``."""
        row = self.reduce(row)
        if not row:
            return "zero", row
        p = self._choose(row)
        if p is None:
            return "residual", row
        row = row_scale(row, row[p].inverse())
        self.pivots[p] = row
        self.pivot_order.append(p)
        return "pivot", row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def back_substitute(self) -> dict[int, Row]:
        """Fully reduced rows (zero in every other pivot column), keyed by pivot."""
        out: dict[int, Row] = {}
        for p in reversed(self.pivot_order):
            row = dict(self.pivots[p])
            for q, r in out.items():
                c = row.get(q)
                if c is not None:
                    row_axpy(row, c, r, skip=q)
            out[p] = row
        return {p: out[p] for p in self.pivot_order}


def rref_rows(rows: Iterable[Row], order: dict[int, int]) -> dict[int, Row]:
    """Reduced row echelon form with pivots taken in the given column order."""
    el = Eliminator(order=order, pivot_rule="first")
    for r in rows:
        el.add(r)
    red = el.back_substitute()
    return {p: red[p] for p in sorted(red, key=lambda c: order[c])}


# ---------------------------------------------------------------------------
# labelled dense matrices


@dataclass
class MatK:
    """Dense matrix over K with row and column labels."""

    ring: PolyRing
    rows: list[list[RatFun]]
    col_labels: list = field(default_factory=list)
    row_labels: list = field(default_factory=list)

    def __post_init__(self):
        ncols = len(self.col_labels) if self.col_labels else (len(self.rows[0]) if self.rows else 0)
        if not self.col_labels:
            self.col_labels = list(range(ncols))
        if not self.row_labels:
            self.row_labels = list(range(len(self.rows)))
        if len(self.row_labels) != len(self.rows):
            raise ValueError("row label count does not match rows")
        for r in self.rows:
            if len(r) != len(self.col_labels):
                raise ValueError("row length does not match column labels")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.col_labels)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def sparse_rows(self) -> list[Row]:
        return [{j: v for j, v in enumerate(r) if not v.is_zero()} for r in self.rows]

    @classmethod
    def from_sparse(cls, ring, rows: Sequence[Row], col_labels, row_labels=None) -> "MatK":
        z = RatFun.zero(ring)
        dense = [[r.get(j, z) for j in range(len(col_labels))] for r in rows]
        return cls(ring, dense, list(col_labels), list(row_labels) if row_labels else [])

    @classmethod
    def from_strings(cls, ring, rows: Sequence[Sequence[str]], col_labels=None, row_labels=None) -> "MatK":
        dense = [[parse_ratfun(str(x), ring) for x in r] for r in rows]
        return cls(ring, dense, list(col_labels) if col_labels else [], list(row_labels) if row_labels else [])

    @classmethod
    def identity(cls, ring, size: int, labels=None) -> "MatK":
        z, o = RatFun.zero(ring), RatFun.one(ring)
        return cls(ring, [[o if i == j else z for j in range(size)] for i in range(size)],
                   list(labels) if labels else [], list(labels) if labels else [])

    def columns(self, labels: Sequence) -> "MatK":
        idx = [self.col_labels.index(c) for c in labels]
        return MatK(self.ring, [[r[j] for j in idx] for r in self.rows], list(labels), list(self.row_labels))

    def select_rows(self, idx: Sequence[int]) -> "MatK":
        return MatK(self.ring, [self.rows[i] for i in idx], list(self.col_labels),
                    [self.row_labels[i] for i in idx])

    def __eq__(self, other):
        if not isinstance(other, MatK):
            return NotImplemented
        return self.rows == other.rows

    def to_text(self, ell: int | None = None) -> str:
        """Header line of column labels, then tab-separated canonical entries."""
        def lab(c):
            if ell is not None and isinstance(c, tuple):
                return format_monomial(c, ell)
            return str(c)
        lines = ["\t".join(lab(c) for c in self.col_labels)]
        for r in self.rows:
            lines.append("\t".join(str(v) for v in r))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, ring: PolyRing) -> "MatK":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split("\t")
        rows = [ln.split("\t") for ln in lines[1:]]
        return cls.from_strings(ring, rows, header)

    def specialize(self, values: Sequence) -> np.ndarray:
        """Numeric matrix at a parameter point (values in ring variable order)."""
        out = np.empty(self.shape, dtype=complex)
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                out[i, j] = complex(v.evaluate(values))
        return out

    def __str__(self) -> str:
        return self.to_text()


def build_matrix(elements: Sequence[DiffElement], columns: Sequence[Mono]) -> MatK:
    """Coefficient matrix of ``elements`` with respect to the monomials ``columns``."""
    if not elements:
        raise ValueError("no elements")
    model = elements[0].model
    ring = model.ring
    index = {tuple(c): j for j, c in enumerate(columns)}
    rows = []
    for e in elements:
        row = {}
        for m, c in e.terms.items():
            j = index.get(m)
            if j is None:
                raise SupportEscapeError(m, format_monomial(m, model.ell))
            row[j] = c
        rows.append(row)
    return MatK.from_sparse(ring, rows, [tuple(c) for c in columns], list(range(len(elements))))


def rank(m: MatK) -> int:
    """Exact rank over K by fraction elimination."""
    el = Eliminator()
    for r in m.sparse_rows():
        el.add(r)
    return el.rank


def rank_bareiss(m: MatK) -> int:
    """Exact rank by fraction-free (Bareiss) elimination on cleared polynomial rows."""
    ring = m.ring
    rows = []
    for r in m.rows:
        den = {0: 1}
        for v in r:
            if not v.is_zero() and v.d != den:
                g = _gcd_z(den, v.d, ring)
                den = _mul(den, _exquo(v.d, g, ring))
        rows.append([_mul(v.n, _exquo(den, v.d, ring)) if not v.is_zero() else {} for v in r])
    nrows, ncols = len(rows), len(m.col_labels)
    prev = {0: 1}
    rk = 0
    col = 0
    while rk < nrows and col < ncols:
        piv = None
        for i in range(rk, nrows):
            if rows[i][col]:
                if piv is None or len(rows[i][col]) < len(rows[piv][col]):
                    piv = i
        if piv is None:
            col += 1
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk][col]
        for i in range(rk + 1, nrows):
            a = rows[i][col]
            new = []
            for j in range(ncols):
                x = _sub(_mul(p, rows[i][j]), _mul(a, rows[rk][j]))
                if x:
                    x = _exquo(x, prev, ring)
                new.append(x)
            rows[i] = new
        prev = p
        rk += 1
        col += 1
    return rk


def cokernel(m: MatK) -> MatK:
    """Basis of the left nullspace ``{v : v m = 0}`` in reduced echelon form.

    Each returned row has first nonzero entry 1.
    """
    ring = m.ring
    nr, nc = m.shape
    one = RatFun.one(ring)
    # augmented [M | I]; identity columns are offset by nc and may not pivot
    el = Eliminator(allowed=lambda c: c < nc)
    kernel_rows = []
    for i, r in enumerate(m.sparse_rows()):
        aug = dict(r)
        aug[nc + i] = one
        kind, red = el.add(aug)
        if kind == "residual":
            kernel_rows.append({c - nc: v for c, v in red.items()})
    red = rref_rows(kernel_rows, {j: j for j in range(nr)})
    return MatK.from_sparse(ring, list(red.values()), list(m.row_labels) or list(range(nr)))


def normalize_rows(m: MatK, pivot_block: Sequence) -> MatK:
    """Pick rank-many independent rows (first in stored order) and invert the pivot block.

    The result has an identity on the ``pivot_block`` columns (in the given
    order).  Raises :class:`SingularPivotBlock` if those columns do not
    carry an invertible block.
    """
    rows = m.sparse_rows()
    el = Eliminator()
    chosen = []
    for r in rows:
        kind, _ = el.add(r)
        if kind == "pivot":
            chosen.append(r)
    col_index = {c: j for j, c in enumerate(m.col_labels)}
    pivot_idx = [col_index[c] for c in pivot_block]
    if len(chosen) != len(pivot_idx):
        raise SingularPivotBlock(
            f"rank {len(chosen)} differs from pivot block size {len(pivot_idx)}"
        )
    pset = set(pivot_idx)
    order = {j: k for k, j in enumerate(pivot_idx)}
    base = len(order)
    for j in range(len(m.col_labels)):
        if j not in order:
            order[j] = base + j
    el2 = Eliminator(allowed=lambda c: c in pset, order=order, pivot_rule="first")
    for r in chosen:
        kind, _ = el2.add(r)
        if kind != "pivot":
            raise SingularPivotBlock("pivot block is singular")
    red = el2.back_substitute()
    ordered = [red[j] for j in pivot_idx]
    return MatK.from_sparse(m.ring, ordered, m.col_labels, [m.col_labels[j] for j in pivot_idx])


def row_space_equal(a: MatK, b: MatK) -> bool:
    """True iff the two matrices (same columns) have the same row space over K."""
    if list(a.col_labels) != list(b.col_labels):
        raise ValueError("column labels differ")
    order = {j: j for j in range(len(a.col_labels))}
    ra = rref_rows(a.sparse_rows(), order)
    rb = rref_rows(b.sparse_rows(), order)
    return ra == rb


# ---------------------------------------------------------------------------
# small square matrices as nested lists of RatFun


SqMat = list[list[RatFun]]


def mat_mul(a: SqMat, b: SqMat) -> SqMat:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    ring = (a[0][0] if a and a[0] else b[0][0]).ring
    z = RatFun.zero(ring)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = z
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def mat_vec(a: SqMat, v: Sequence[RatFun]) -> list[RatFun]:
    ring = v[0].ring
    z = RatFun.zero(ring)
    out = []
    for row in a:
        acc = z
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return out


def vec_mat(v: Sequence[RatFun], a: SqMat) -> list[RatFun]:
    """Row vector times matrix."""
    return mat_vec(transpose(a), v)


def transpose(a: SqMat) -> SqMat:
    return [list(r) for r in zip(*a)]


def mat_inv(a: SqMat) -> SqMat:
    """Inverse by Gauss-Jordan; raises ``ZeroDivisionError`` if singular."""
    n = len(a)
    ring = a[0][0].ring
    one = RatFun.one(ring)
    el = Eliminator(allowed=lambda c: c < n)
    for i, r in enumerate(a):
        row = {j: v for j, v in enumerate(r) if not v.is_zero()}
        row[n + i] = one
        kind, _ = el.add(row)
        if kind != "pivot":
            raise ZeroDivisionError("singular matrix")
    red = el.back_substitute()
    z = RatFun.zero(ring)
    return [[red[i].get(n + j, z) for j in range(n)] for i in range(n)]


def mat_shift(a: SqMat, u: Sequence[int], ring_index: Sequence[int]) -> SqMat:
    """Translate every entry's parameters by ``u`` (given in direction order)."""
    out = []
    for r in a:
        row = []
        for v in r:
            for d, x in enumerate(u):
                if x:
                    v = v.shift(ring_index[d], x)
            row.append(v)
        out.append(row)
    return out


def mat_identity(ring: PolyRing, n: int) -> SqMat:
    z, o = RatFun.zero(ring), RatFun.one(ring)
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def mat_specialize(a: SqMat, values: Sequence) -> np.ndarray:
    return np.array([[complex(v.evaluate(values)) for v in r] for r in a], dtype=complex)


def mat_to_strings(a: SqMat) -> list[list[str]]:
    return [[str(v) for v in r] for r in a]
