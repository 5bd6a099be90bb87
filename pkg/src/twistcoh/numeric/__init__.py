"""Numerical solution of the likelihood equations."""

from .homotopy import TotalDegreeHomotopy, TrackerOptions, track_path
from .solve import (
    CriticalPoint,
    SolveOptions,
    SolveReport,
    SolverError,
    critical_points,
    euler_characteristic,
    solve_system,
)
from .system import LikelihoodEvaluator, PolySystem, Specialization, clear_denominators

__all__ = [
    "CriticalPoint",
    "LikelihoodEvaluator",
    "PolySystem",
    "SolveOptions",
    "SolveReport",
    "SolverError",
    "Specialization",
    "TotalDegreeHomotopy",
    "TrackerOptions",
    "clear_denominators",
    "critical_points",
    "euler_characteristic",
    "solve_system",
    "track_path",
]
