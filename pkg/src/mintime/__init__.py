"""Minimum-time trajectory planning through sequences of convex sets.

A trajectory must traverse safe convex sets in order, start and stop at
rest at fixed endpoints, and respect convex velocity and acceleration
bounds, all in minimum total time. The solver builds a feasible
polygonal trajectory first and then alternates between two convex
restrictions of the problem, one with the set-to-set transition points
held fixed and one with the transition velocities held fixed, so every
iterate stays feasible and the objective never increases.
"""

from .bezier import BezierCurve, bernstein
from .bench import BenchRecord, StaircaseSpec, run_suite, staircase_instance
from .conic import BackendConfig, ConicProgram, Solution, SolverFailure
from .geometry import Ball, ConvexSet, HPolytope, ellipsoid_tangent_polytope, intersection_nonempty
from .problem import ProblemInstance, SolverConfig
from .solver import (
    FeasibilityReport,
    InitializationError,
    IterationRecord,
    SolveReport,
    ValidationReport,
    check_feasibility,
    initialize,
    solve,
    transition_data,
    validate,
)
from .subproblems import TransitionData
from .trajectory import Trajectory

__version__ = "0.1.0"

__all__ = [
    "BackendConfig",
    "Ball",
    "BenchRecord",
    "BezierCurve",
    "ConicProgram",
    "ConvexSet",
    "FeasibilityReport",
    "HPolytope",
    "InitializationError",
    "IterationRecord",
    "ProblemInstance",
    "Solution",
    "SolveReport",
    "SolverConfig",
    "SolverFailure",
    "StaircaseSpec",
    "TransitionData",
    "Trajectory",
    "ValidationReport",
    "bernstein",
    "check_feasibility",
    "ellipsoid_tangent_polytope",
    "initialize",
    "intersection_nonempty",
    "run_suite",
    "solve",
    "staircase_instance",
    "transition_data",
    "validate",
    "__version__",
]
