"""Generic parameter points, the cleared likelihood equations, and fast evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..symbolic.laurent import LaurentPoly
from ..symbolic.model import ModelSpec

SPEC_JITTER = 0.25


@dataclass(frozen=True)
class Specialization:
    """Complex values for the parameters, reproducible from ``seed``."""

    s: tuple[complex, ...]
    nu: tuple[complex, ...]
    seed: int

    @classmethod
    def random(cls, model: ModelSpec, seed: int) -> "Specialization":
        rng = np.random.default_rng(seed)

        def draw(k):
            z = rng.uniform(-1, 1, k) + 1j * rng.uniform(-1, 1, k)
            z = z / np.abs(z)
            return z * (1 + rng.uniform(-SPEC_JITTER, SPEC_JITTER, k))

        return cls(tuple(complex(v) for v in draw(model.ell)),
                   tuple(complex(v) for v in draw(model.n)), int(seed))

    def ring_values(self, model: ModelSpec) -> list[complex]:
        """Values in the parameter ring's variable order."""
        return model.param_values(self.s, self.nu)

    def shifted(self, model: ModelSpec, u: Sequence[int]) -> "Specialization":
        """Parameters translated by an integer vector in direction order (s first)."""
        ell = model.ell
        s = tuple(v + du for v, du in zip(self.s, u[:ell]))
        nu = tuple(v + du for v, du in zip(self.nu, u[ell:]))
        return Specialization(s, nu, self.seed)


class CompiledPolys:
    """A list of polynomials sharing one monomial table, with vectorized Jacobian.

    ``exps`` is a (T, n) integer array of non-negative exponents and
    ``coeffs`` an (m, T) complex array.
    """

    def __init__(self, exps: np.ndarray, coeffs: np.ndarray):
        self.exps = np.asarray(exps, dtype=np.int64)
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.m, self.T = self.coeffs.shape
        self.n = self.exps.shape[1]
        # derivative tables: d/dx_k of x^a is a_k x^(a - e_k)
        self.dexps = []
        self.dcoef = []
        for k in range(self.n):
            e = self.exps.copy()
            mult = e[:, k].astype(float)
            e[:, k] = np.maximum(e[:, k] - 1, 0)
            self.dexps.append(e)
            self.dcoef.append(self.coeffs * mult[None, :])

    @staticmethod
    def _mono(x: np.ndarray, exps: np.ndarray) -> np.ndarray:
        return np.prod(x[None, :] ** exps, axis=1)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.coeffs @ self._mono(x, self.exps)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        J = np.empty((self.m, self.n), dtype=complex)
        for k in range(self.n):
            J[:, k] = self.dcoef[k] @ self._mono(x, self.dexps[k])
        return J

    def term_scale(self, x: np.ndarray) -> np.ndarray:
        """Sum of absolute term values per equation (for relative residuals)."""
        return np.abs(self.coeffs) @ np.abs(self._mono(x, self.exps))

    def degrees(self) -> list[int]:
        tot = self.exps.sum(axis=1)
        return [int(tot[np.abs(self.coeffs[i]) > 0].max()) if np.any(self.coeffs[i]) else 0
                for i in range(self.m)]


@dataclass
class PolySystem:
    """Square polynomial system plus the locus its solutions must avoid."""

    equations: list[dict[tuple[int, ...], complex]]
    forbidden: tuple[LaurentPoly, ...]
    n: int

    def compile(self) -> CompiledPolys:
        monos = sorted({e for eq in self.equations for e in eq})
        index = {e: i for i, e in enumerate(monos)}
        exps = np.array(monos, dtype=np.int64).reshape(len(monos), self.n)
        coeffs = np.zeros((len(self.equations), len(monos)), dtype=complex)
        for i, eq in enumerate(self.equations):
            for e, c in eq.items():
                coeffs[i, index[e]] = c
        return CompiledPolys(exps, coeffs)


def _lp_mul_c(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return out


def _lp_add_c(p: dict, q: dict, scale=1) -> dict:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + scale * c
    return out


def cleared_equations(model: ModelSpec, s: Sequence, nu: Sequence) -> list[dict]:
    """``x_j * prod_i f_i * omega_j`` as Laurent term dicts with given coefficient values.

    Works with exact (Fraction) or complex values.
    """
    n, ell = model.n, model.ell
    fs = [dict(p.terms) for p in model.f]
    one = {(0,) * n: 1}
    prod_all = one
    for f in fs:
        prod_all = _lp_mul_c(prod_all, f)
    out = []
    for j in range(n):
        eq = {e: nu[j] * c for e, c in prod_all.items()}
        for i in range(ell):
            others = one
            for k, f in enumerate(fs):
                if k != i:
                    others = _lp_mul_c(others, f)
            xdf = model.df[i][j].shift_exponents(tuple(1 if t == j else 0 for t in range(n)))
            term = _lp_mul_c(dict(xdf.terms), others)
            eq = _lp_add_c(eq, term, -s[i])
        eq = {e: c for e, c in eq.items() if c != 0}
        out.append(eq)
    return out


def _to_polynomial(eq: dict, n: int) -> dict:
    """Divide by the largest monomial so every exponent is non-negative and minimal."""
    if not eq:
        return eq
    lo = [min(e[j] for e in eq) for j in range(n)]
    return {tuple(a - b for a, b in zip(e, lo)): c for e, c in eq.items()}


def clear_denominators(model: ModelSpec, spec: Specialization) -> PolySystem:
    """The likelihood equations at ``spec`` as a square polynomial system."""
    eqs = cleared_equations(model, spec.s, spec.nu)
    eqs = [{e: complex(c) for e, c in _to_polynomial(eq, model.n).items()} for eq in eqs]
    coords = tuple(LaurentPoly.gen(model.vars, j) for j in range(model.n))
    return PolySystem(eqs, tuple(model.f) + coords, model.n)


class LikelihoodEvaluator:
    """Numeric omega, Hessian of log L and monomial values for one model and spec."""

    def __init__(self, model: ModelSpec, spec: Specialization):
        self.model = model
        self.spec = spec
        self.s = np.array(spec.s, dtype=complex)
        self.nu = np.array(spec.nu, dtype=complex)
        n = model.n
        self.f = [p.compile() for p in model.f]
        self.df = [[model.df[i][j].compile() for j in range(n)] for i in range(model.ell)]
        self.ddf = [[[model.df[i][j].derivative(k).compile() for k in range(n)] for j in range(n)]
                    for i in range(model.ell)]

    def f_values(self, x: np.ndarray) -> np.ndarray:
        return np.array([f(x) for f in self.f], dtype=complex)

    def omega(self, x: np.ndarray) -> np.ndarray:
        fv = self.f_values(x)
        n = self.model.n
        out = self.nu / x
        for i in range(self.model.ell):
            for j in range(n):
                out[j] -= self.s[i] * self.df[i][j](x) / fv[i]
        return out

    def hessian_matrix(self, x: np.ndarray) -> np.ndarray:
        n = self.model.n
        fv = self.f_values(x)
        H = np.diag(-self.nu / x**2).astype(complex)
        for i in range(self.model.ell):
            g = np.array([self.df[i][j](x) for j in range(n)])
            for j in range(n):
                for k in range(n):
                    H[j, k] -= self.s[i] * (self.ddf[i][j][k](x) / fv[i] - g[j] * g[k] / fv[i] ** 2)
        return H

    def hessian(self, x: np.ndarray) -> complex:
        return complex(np.linalg.det(self.hessian_matrix(x)))
