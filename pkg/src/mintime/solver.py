"""Minimum-time trajectory solver.

The pipeline: validate the instance, build a polygonal trajectory that
comes to a full stop at each corner, then improve it by alternating
between the two convex restrictions (fixed transition points, fixed
transition velocities) until the relative objective decrease between
two subproblems of the same kind falls below the tolerance.

Every accepted iterate is itself feasible for the original problem, so
stopping at any point still yields a valid trajectory.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import conic, geometry, subproblems
from .problem import ProblemInstance, SolverConfig
from .subproblems import FIXED_POINTS, FIXED_VELOCITY, TransitionData
from .trajectory import Trajectory

TOLERANCE_MET = "tolerance-met"
MAX_SUBPROBLEMS = "max-subproblems"
BACKEND_FAILURE = "backend-failure-anytime"


class InitializationError(RuntimeError):
    """The initialization programs failed; for validated instances this
    points at a backend or configuration problem, not infeasibility."""


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)
    assumption1_checked: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class IterationRecord:
    kind: str
    objective: float
    wall_time: float
    status: str


@dataclass
class SolveReport:
    trajectory: Trajectory
    records: List[IterationRecord]
    termination: str
    initialization_objective: float
    initialization_time: float

    @property
    def num_subproblems(self) -> int:
        return len(self.records)

    @property
    def objective(self) -> float:
        return self.trajectory.duration


@dataclass
class FeasibilityReport:
    """Two-tier residual summary for a trajectory against an instance.

    The certificate tier bounds each trajectory piece by the convex
    hull of its control points, so residuals <= tol certify the
    constraints at all continuous times. The sampling tier evaluates a
    dense time grid and is necessary but not sufficient.
    """

    tol: float
    boundary: float
    certificate_position: float
    certificate_velocity: float
    certificate_acceleration: float
    sampled_position: float
    sampled_velocity: float
    sampled_acceleration: float

    @property
    def certificate_ok(self) -> bool:
        worst = max(self.boundary, self.certificate_position,
                    self.certificate_velocity, self.certificate_acceleration)
        return worst <= self.tol

    @property
    def sampled_ok(self) -> bool:
        worst = max(self.boundary, self.sampled_position,
                    self.sampled_velocity, self.sampled_acceleration)
        return worst <= self.tol

    @property
    def ok(self) -> bool:
        return self.certificate_ok and self.sampled_ok


def validate(problem: ProblemInstance, config: Optional[SolverConfig] = None) -> ValidationReport:
    """Check the instance invariants via feasibility solves.

    With config.assumption1_check also verifies the sufficient
    condition for strictly positive traversal times: the endpoints
    avoid their neighboring sets and no three consecutive sets share a
    point. Violations are collected, never raised.
    """
    config = config or SolverConfig()
    backend = config.backend
    sets = problem.safe_sets
    I = problem.num_sets
    report = ValidationReport(assumption1_checked=config.assumption1_check)
    v = report.violations

    if not sets[0].contains(problem.q_init, 1e-9):
        v.append("initial point lies outside safe set 1")
    if not sets[I - 1].contains(problem.q_term, 1e-9):
        v.append(f"terminal point lies outside safe set {I}")
    for i in range(I - 1):
        if not geometry.intersection_nonempty(sets[i], sets[i + 1], backend=backend):
            v.append(f"safe sets {i + 1} and {i + 2} do not intersect")
    if not problem.velocity_set.contains_origin_strictly():
        v.append("velocity set must contain the origin in its interior")
    if not problem.acceleration_set.contains_origin_strictly():
        v.append("acceleration set must contain the origin in its interior")

    if config.assumption1_check:
        if I >= 2 and sets[1].contains(problem.q_init, 1e-9):
            v.append("initial point lies inside safe set 2")
        if I >= 2 and sets[I - 2].contains(problem.q_term, 1e-9):
            v.append(f"terminal point lies inside safe set {I - 1}")
        for i in range(I - 2):
            if geometry.sets_intersect([sets[i], sets[i + 1], sets[i + 2]], backend=backend):
                v.append(f"safe sets {i + 1}, {i + 2}, {i + 3} share a point")
    return report


def initialize(problem: ProblemInstance, config: Optional[SolverConfig] = None) -> Trajectory:
    """Feasible trajectory from the shortest polygonal path.

    Solves the polygonal program, keeps its corner points as vertices,
    connects consecutive vertices by minimum-time straight segments
    with zero endpoint velocities, and cuts those segments at the
    intervening transition points so the result has exactly one piece
    per safe set.
    """
    config = config or SolverConfig()
    program, layout = subproblems.build_polygonal(problem)
    points = subproblems.decode_polygonal(layout, conic.solve(program, config.backend))

    for i in range(1, points.shape[0]):
        step = np.linalg.norm(points[i] - points[i - 1])
        scale = max(1.0, np.linalg.norm(points[i]), np.linalg.norm(points[i - 1]))
        # below backend noise a leg is indistinguishable from a repeat
        if step <= 1e-7 * scale:
            raise InitializationError(
                f"polygonal path repeats a point at transition {i}; "
                "a traversal time would collapse to zero (consider a "
                "minimum traversal time, or check the overlap structure)")

    vertices = subproblems.select_vertices(points)
    segments = []
    try:
        for a, b in zip(vertices[:-1], vertices[1:]):
            curve, duration = subproblems.solve_vertex_to_vertex(
                points[a], points[b], problem.velocity_set,
                problem.acceleration_set, config.degree, config.backend)
            interior = [points[j] for j in range(a + 1, b)]
            segments.extend(subproblems.split_segment(curve, duration, interior, tol=1e-5))
    except conic.SolverFailure as err:
        raise InitializationError(str(err)) from err
    if len(segments) != problem.num_sets:
        raise InitializationError(
            f"expected {problem.num_sets} pieces, assembled {len(segments)}")
    return Trajectory(segments)


def transition_data(trajectory: Trajectory) -> TransitionData:
    """Junction positions and velocities of a trajectory."""
    points, velocities = [], []
    for curve, T in trajectory.segments[:-1]:
        points.append(curve.control_points[-1])
        velocities.append(curve.derivative().control_points[-1] / T)
    n = trajectory.dim
    if not points:
        return TransitionData(np.zeros((0, n)), np.zeros((0, n)))
    return TransitionData(np.asarray(points), np.asarray(velocities))


def solve(problem: ProblemInstance, config: Optional[SolverConfig] = None) -> SolveReport:
    """Run the full pipeline and report every iteration.

    Assumes the instance validates. Alternation starts with the
    fixed-points subproblem; the incumbent is replaced only after an
    optimal backend status, so a backend breakdown mid-run still
    returns the best trajectory found so far.
    """
    config = config or SolverConfig()
    t0 = _time.perf_counter()
    incumbent = initialize(problem, config)
    init_time = _time.perf_counter() - t0
    init_objective = incumbent.duration

    records: List[IterationRecord] = []
    previous = {FIXED_POINTS: None, FIXED_VELOCITY: None}
    kind = FIXED_POINTS
    termination = MAX_SUBPROBLEMS

    for _ in range(config.max_subproblems):
        nominal = incumbent.durations
        junctions = transition_data(incumbent)
        if kind == FIXED_POINTS:
            program, layout = subproblems.build_fixed_points(
                problem, config.degree, junctions.points, nominal,
                config.zero_transition_acceleration, config.min_traversal_time)
        else:
            program, layout = subproblems.build_fixed_velocity(
                problem, config.degree, junctions.velocities, nominal,
                config.zero_transition_acceleration, config.min_traversal_time)

        t_start = _time.perf_counter()
        solution = conic.solve(program, config.backend)
        wall = _time.perf_counter() - t_start

        if solution.status != conic.OPTIMAL:
            records.append(IterationRecord(kind, float("nan"), wall, solution.status))
            termination = BACKEND_FAILURE
            break
        try:
            candidate = subproblems.decode_trajectory(layout, solution)
        except subproblems.DegenerateTimeError:
            records.append(IterationRecord(kind, float("nan"), wall, "degenerate-time"))
            termination = BACKEND_FAILURE
            break

        objective = candidate.duration
        records.append(IterationRecord(kind, objective, wall, solution.status))
        if objective <= incumbent.duration:
            incumbent = candidate
        prev = previous[kind]
        previous[kind] = objective
        if prev is not None and (prev - objective) < config.tolerance * prev:
            termination = TOLERANCE_MET
            break
        kind = FIXED_VELOCITY if kind == FIXED_POINTS else FIXED_POINTS

    return SolveReport(incumbent, records, termination, init_objective, init_time)


def check_feasibility(
    trajectory: Trajectory,
    problem: ProblemInstance,
    samples_per_segment: int = 100,
    tol: float = 1e-6,
) -> FeasibilityReport:
    """Residuals of a trajectory against the instance constraints."""
    if trajectory.num_segments != problem.num_sets:
        raise ValueError("trajectory and instance disagree on the number of segments")

    boundary = max(
        float(np.linalg.norm(trajectory.position(0.0) - problem.q_init)),
        float(np.linalg.norm(trajectory.position(trajectory.duration) - problem.q_term)),
        float(np.linalg.norm(trajectory.velocity(0.0))),
        float(np.linalg.norm(trajectory.velocity(trajectory.duration))),
    )

    cert = {"position": 0.0, "velocity": 0.0, "acceleration": 0.0}
    samp = {"position": 0.0, "velocity": 0.0, "acceleration": 0.0}
    grid = np.linspace(0.0, 1.0, samples_per_segment)
    for (curve, T), safe_set in zip(trajectory.segments, problem.safe_sets):
        vel = curve.derivative()
        acc = vel.derivative()
        families = (
            ("position", safe_set, curve, 1.0),
            ("velocity", problem.velocity_set, vel, 1.0 / T),
            ("acceleration", problem.acceleration_set, acc, 1.0 / T**2),
        )
        for name, set_, piece, scale in families:
            for point in piece.control_points:
                cert[name] = max(cert[name], set_.membership_residual(point * scale))
            for point in piece.evaluate(grid):
                samp[name] = max(samp[name], set_.membership_residual(point * scale))

    return FeasibilityReport(
        tol, boundary,
        cert["position"], cert["velocity"], cert["acceleration"],
        samp["position"], samp["velocity"], samp["acceleration"])
