"""Critical points of the log-likelihood and the Euler characteristic."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..symbolic.model import ModelSpec
from .homotopy import TotalDegreeHomotopy, TrackerOptions, refine, track_all
from .system import LikelihoodEvaluator, PolySystem, Specialization, clear_denominators


class SolverError(RuntimeError):
    """Path tracking failed or gave inconsistent counts."""


@dataclass(frozen=True)
class SolveOptions:
    tol_final: float = 1e-10
    tol_omega: float = 1e-8
    degeneracy: float = 1e-10
    dedup: float = 1e-6
    max_paths: int | None = None
    gamma_check: bool = False
    tracker: TrackerOptions = field(default_factory=TrackerOptions)


@dataclass(frozen=True)
class CriticalPoint:
    """A nondegenerate solution of omega = 0 on X."""

    coordinates: tuple[complex, ...]
    eta: complex
    residual: float
    omega_residual: float = 0.0

    @property
    def x(self) -> np.ndarray:
        return np.array(self.coordinates, dtype=complex)

    def to_json(self) -> dict:
        return {
            "x": [[z.real, z.imag] for z in self.coordinates],
            "eta": [self.eta.real, self.eta.imag],
            "residual": self.residual,
        }


@dataclass
class SolveReport:
    points: list[CriticalPoint]
    spec: Specialization
    paths: int
    status_counts: dict[str, int]
    rejected: dict[str, int]


def _canonical_sort(points: list[np.ndarray]) -> list[np.ndarray]:
    return sorted(points, key=lambda p: tuple(round(v, 8) for z in p for v in (z.real, z.imag)))


def _dedup(points: list[np.ndarray], tol: float) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for p in _canonical_sort(points):
        if all(np.linalg.norm(p - q) > tol * (1 + np.linalg.norm(q)) for q in out):
            out.append(p)
    return out


def _run(model: ModelSpec, spec: Specialization, sys: PolySystem, gamma_seed: int,
         opts: SolveOptions) -> SolveReport:
    F = sys.compile()
    hom = TotalDegreeHomotopy(F, np.random.default_rng([spec.seed, gamma_seed]))
    results = track_all(hom, opts.tracker, opts.max_paths)
    ev = LikelihoodEvaluator(model, spec)
    status = Counter(r.status for r in results)
    rejected: Counter = Counter()
    good = []
    for r in results:
        if r.status != "success":
            continue
        x = refine(F, r.end)
        if not np.all(np.isfinite(x)):
            rejected["nonfinite"] += 1
            continue
        if np.min(np.abs(x)) < opts.degeneracy or np.linalg.norm(x) > 1e8:
            rejected["coordinate"] += 1
            continue
        fv = ev.f_values(x)
        if np.min(np.abs(fv)) < opts.degeneracy:
            rejected["hypersurface"] += 1
            continue
        scale = F.term_scale(x)
        res = float(np.max(np.abs(F(x)) / np.maximum(scale, 1.0)))
        if res >= opts.tol_final:
            rejected["residual"] += 1
            continue
        om = float(np.max(np.abs(ev.omega(x))))
        if om >= opts.tol_omega:
            rejected["omega"] += 1
            continue
        good.append((x, res, om))
    pts = _dedup([g[0] for g in good], opts.dedup)
    lookup = {id(g[0]): g for g in good}
    out = []
    for p in pts:
        _, res, om = lookup[id(p)]
        eta = ev.hessian(p)
        if abs(eta) < opts.degeneracy:
            rejected["degenerate"] += 1
            continue
        out.append(CriticalPoint(tuple(complex(z) for z in p), eta, res, om))
    return SolveReport(out, spec, len(results), dict(status), dict(rejected))


def solve_system(model: ModelSpec, spec: Specialization, options: SolveOptions | None = None) -> SolveReport:
    """All critical points of log L at ``spec`` by total-degree homotopy.

    With ``options.gamma_check`` the system is solved twice with different
    random gamma and start roots; differing counts raise :class:`SolverError`.
    """
    opts = options or SolveOptions()
    sys = clear_denominators(model, spec)
    rep = _run(model, spec, sys, 0, opts)
    if opts.gamma_check:
        rep2 = _run(model, spec, sys, 1, opts)
        if len(rep2.points) != len(rep.points):
            raise SolverError(
                f"nondeterminism alarm: {len(rep.points)} vs {len(rep2.points)} solutions "
                f"for two gamma draws (seed {spec.seed})")
    return rep


def critical_points(model: ModelSpec, seed: int = 0, options: SolveOptions | None = None
                    ) -> tuple[list[CriticalPoint], Specialization]:
    spec = Specialization.random(model, seed)
    rep = solve_system(model, spec, options)
    return rep.points, spec


def euler_characteristic(model: ModelSpec, trials: int = 3, seed: int = 0,
                         options: SolveOptions | None = None) -> int:
    """Number of critical points, required to agree over ``trials`` specializations."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    counts = []
    for t in range(trials):
        pts, _ = critical_points(model, seed + t, options)
        counts.append(len(pts))
    if len(set(counts)) != 1:
        raise SolverError(f"inconsistent critical point counts across trials: {counts}")
    return counts[0]
