"""Total-degree homotopy continuation with an RK4 predictor and Newton corrector."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .system import CompiledPolys


@dataclass(frozen=True)
class TrackerOptions:
    h_init: float = 0.02
    h_max: float = 0.1
    h_min: float = 1e-9
    corrector_iters: int = 3
    corrector_tol: float = 1e-9
    divergence_norm: float = 1e8
    max_steps: int = 20000
    refine_iters: int = 30


@dataclass
class PathResult:
    start: np.ndarray
    end: np.ndarray
    status: str  # "success", "diverged", "min_step", "max_steps", "singular"
    steps: int
    t: float


class TotalDegreeHomotopy:
    """``H(x, t) = (1 - t) * gamma * G(x) + t * F(x)`` with ``G_j = x_j^{d_j} - r_j``."""

    def __init__(self, target: CompiledPolys, rng: np.random.Generator):
        self.F = target
        self.n = target.n
        self.degrees = target.degrees()
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"equation of degree < 1 in the target system: {self.degrees}")
        ang = rng.uniform(0, 2 * np.pi, self.n)
        self.r = np.exp(1j * ang)
        self.gamma = np.exp(1j * rng.uniform(0, 2 * np.pi))
        self.d = np.array(self.degrees, dtype=float)

    @property
    def path_count(self) -> int:
        return int(np.prod(self.degrees))

    def start_points(self) -> list[np.ndarray]:
        roots = []
        for j, d in enumerate(self.degrees):
            base = self.r[j] ** (1.0 / d)
            roots.append([base * np.exp(2j * np.pi * k / d) for k in range(d)])
        return [np.array(p, dtype=complex) for p in product(*roots)]

    def G(self, x):
        return x ** self.degrees - self.r

    def dG(self, x):
        return np.diag(self.d * x ** (np.array(self.degrees) - 1))

    def H(self, x, t):
        return (1 - t) * self.gamma * self.G(x) + t * self.F(x)

    def Hx(self, x, t):
        return (1 - t) * self.gamma * self.dG(x) + t * self.F.jacobian(x)

    def Ht(self, x, t):
        return self.F(x) - self.gamma * self.G(x)

    def velocity(self, x, t):
        return -np.linalg.solve(self.Hx(x, t), self.Ht(x, t))


def _newton(hom: TotalDegreeHomotopy, x, t, iters, tol):
    for _ in range(iters):
        J = hom.Hx(x, t)
        dx = np.linalg.solve(J, hom.H(x, t))
        x = x - dx
        if np.linalg.norm(dx) <= tol * (1 + np.linalg.norm(x)):
            return x, True
    return x, False


def track_path(hom: TotalDegreeHomotopy, x0: np.ndarray, opts: TrackerOptions = TrackerOptions()) -> PathResult:
    """Follow one path from t = 0 to t = 1."""
    x = x0.astype(complex)
    t = 0.0
    h = opts.h_init
    streak = 0
    steps = 0
    try:
        while t < 1.0:
            if steps >= opts.max_steps:
                return PathResult(x0, x, "max_steps", steps, t)
            steps += 1
            h = min(h, 1.0 - t)
            # RK4 predictor on the Davidenko equation
            k1 = hom.velocity(x, t)
            k2 = hom.velocity(x + 0.5 * h * k1, t + 0.5 * h)
            k3 = hom.velocity(x + 0.5 * h * k2, t + 0.5 * h)
            k4 = hom.velocity(x + h * k3, t + h)
            xp = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            xc, ok = _newton(hom, xp, t + h, opts.corrector_iters, opts.corrector_tol)
            if ok and np.all(np.isfinite(xc)):
                x = xc
                t = t + h
                streak += 1
                if streak >= 3:
                    h = min(2 * h, opts.h_max)
                    streak = 0
                if np.linalg.norm(x) > opts.divergence_norm:
                    return PathResult(x0, x, "diverged", steps, t)
            else:
                h *= 0.5
                streak = 0
                if h < opts.h_min:
                    status = "diverged" if np.linalg.norm(x) > 1e4 else "min_step"
                    return PathResult(x0, x, status, steps, t)
    except np.linalg.LinAlgError:
        return PathResult(x0, x, "singular", steps, t)
    return PathResult(x0, x, "success", steps, 1.0)


def refine(F: CompiledPolys, x: np.ndarray, iters: int = 30, tol: float = 1e-15) -> np.ndarray:
    """Newton iterations on the target system."""
    for _ in range(iters):
        try:
            dx = np.linalg.solve(F.jacobian(x), F(x))
        except np.linalg.LinAlgError:
            break
        x = x - dx
        if np.linalg.norm(dx) <= tol * (1 + np.linalg.norm(x)):
            break
    return x


def track_all(hom: TotalDegreeHomotopy, opts: TrackerOptions = TrackerOptions(),
              max_paths: int | None = None) -> list[PathResult]:
    starts = hom.start_points()
    if max_paths is not None and len(starts) > max_paths:
        raise ValueError(f"{len(starts)} paths exceed max_paths={max_paths}")
    return [track_path(hom, s, opts) for s in starts]
