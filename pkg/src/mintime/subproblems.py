"""Builders and decoders for the convex programs of the pipeline.

Four programs appear here, all finite-dimensional over Bezier control
points:

* the shortest polygonal path through the safe-set overlaps,
* the minimum-time program for one straight vertex-to-vertex segment,
* the restriction with fixed transition velocities, posed at the
  position level with segment durations T_i as variables,
* the restriction with fixed transition points, posed at the velocity
  level with the duration reciprocals S_i as variables.

Velocity and acceleration control points are kept as explicit variables
tied to the position points by equality rows. This preserves the banded
structure in the segment index, which interior-point backends exploit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import conic
from .bezier import BezierCurve
from .conic import AffineVector, BackendConfig, ConicProgram, SolverFailure
from .geometry import ConvexSet
from .problem import ProblemInstance
from .trajectory import Trajectory

FIXED_VELOCITY = "fixed-velocity"
FIXED_POINTS = "fixed-points"

# Stand-in for the strict positivity of the duration reciprocals; far
# from active whenever consecutive overlaps force nonzero path length.
EPS_S = 1e-9

_av = AffineVector.variables


class DegenerateTimeError(RuntimeError):
    """A decoded duration reciprocal collapsed to the positivity floor."""


@dataclass(frozen=True)
class TransitionData:
    """Positions and velocities at the safe-set handover times."""

    points: np.ndarray      # (I-1, n)
    velocities: np.ndarray  # (I-1, n)


@dataclass(frozen=True)
class PolygonalLayout:
    points: np.ndarray   # (I+1, n) variable indices
    lengths: np.ndarray  # (I,) epigraph variable indices


@dataclass(frozen=True)
class TrajectoryLayout:
    """Variable-index maps for one alternation program.

    `time` holds the durations for the fixed-velocity kind and their
    reciprocals for the fixed-points kind, which also carries the
    duration epigraph variables.
    """

    kind: str
    position: np.ndarray      # (I, K+1, n)
    velocity: np.ndarray      # (I, K, n)
    acceleration: np.ndarray  # (I, K-1, n)
    time: np.ndarray          # (I,)
    epigraph: Optional[np.ndarray] = None


def build_polygonal(problem: ProblemInstance) -> Tuple[ConicProgram, PolygonalLayout]:
    """Shortest polygonal path q_init -> p_1 -> ... -> q_term with
    p_i constrained to the overlap of consecutive safe sets."""
    I, n = problem.num_sets, problem.dim
    program = ConicProgram()
    points = program.add_variables((I + 1) * n).reshape(I + 1, n)
    lengths = program.add_variables(I)
    program.add_objective_term(lengths, 1.0)

    one = AffineVector.constant([1.0])
    program.add_cone_block(_av(points[0]) - problem.q_init, conic.ZERO)
    program.add_cone_block(_av(points[I]) - problem.q_term, conic.ZERO)
    for i in range(1, I):
        x = _av(points[i])
        for cone, rows in problem.safe_sets[i - 1].scaled_membership(x, one):
            program.add_cone_block(rows, cone)
        for cone, rows in problem.safe_sets[i].scaled_membership(x, one):
            program.add_cone_block(rows, cone)
    for i in range(I):
        step = _av(points[i + 1]) - _av(points[i])
        program.add_cone_block([_av(lengths[i : i + 1]), step], conic.SOC)
    return program, PolygonalLayout(points, lengths)


def decode_polygonal(layout: PolygonalLayout, solution: conic.Solution) -> np.ndarray:
    if solution.status != conic.OPTIMAL:
        raise SolverFailure(f"polygonal program ended with status {solution.status}")
    return solution.primal[layout.points]


def select_vertices(points: np.ndarray, rel_tol: float = 1e-12) -> List[int]:
    """Indices of the corner points of a polygonal path.

    Endpoints always count. An interior point is dropped when the
    triangle inequality over its neighbors is tight to within rel_tol,
    i.e. the point lies on the line connecting them. The slack grows
    quadratically in the perpendicular deviation, so solver noise on
    genuinely straight runs stays far below any sensible rel_tol.
    """
    points = np.asarray(points, dtype=float)
    last = points.shape[0] - 1
    vertices = [0]
    for i in range(1, last):
        left = np.linalg.norm(points[i] - points[i - 1])
        right = np.linalg.norm(points[i + 1] - points[i])
        direct = np.linalg.norm(points[i + 1] - points[i - 1])
        if direct < left + right - rel_tol * (left + right):
            vertices.append(i)
    vertices.append(last)
    return vertices


def solve_vertex_to_vertex(
    p_a,
    p_b,
    velocity_set: ConvexSet,
    acceleration_set: ConvexSet,
    degree: int,
    backend: Optional[BackendConfig] = None,
    full_dimensional: bool = False,
) -> Tuple[BezierCurve, float]:
    """Minimum-time straight-line segment from rest at p_a to rest at p_b.

    Works on the scalar progress along the segment direction by
    default, with the velocity and acceleration sets reduced to their
    directional extents; this is lossless because the optimal segment
    is a straight line. The duration T and its reciprocal S are coupled
    through the relaxed inequality T*S >= 1, and the decode rescales so
    that it holds with equality.
    """
    p_a = np.asarray(p_a, dtype=float).ravel()
    p_b = np.asarray(p_b, dtype=float).ravel()
    if degree < 3:
        raise ValueError("segment degree must be at least 3")
    gap = p_b - p_a
    length = float(np.linalg.norm(gap))
    if length < 1e-12:
        raise ValueError("segment endpoints coincide")
    direction = gap / length

    if full_dimensional:
        return _vertex_to_vertex_nd(p_a, p_b, velocity_set, acceleration_set, degree, backend)

    v_fwd, v_back = velocity_set.directional_extent(direction)
    a_fwd, a_back = acceleration_set.directional_extent(direction)
    if not all(np.isfinite([v_fwd, v_back, a_fwd, a_back])):
        raise ValueError("velocity and acceleration sets must be bounded along the segment")

    K = degree
    program = ConicProgram()
    r = program.add_variables(K + 1)
    rd = program.add_variables(K)
    rdd = program.add_variables(K - 1)
    t = program.add_variables(1)
    s = program.add_variables(1)
    program.add_objective_term(t, 1.0)

    program.add_cone_block(_av(r[:1]), conic.ZERO)
    program.add_cone_block(_av(r[-1:]) - length * _av(s), conic.ZERO)
    program.add_cone_block(_av(rd[:1]), conic.ZERO)
    program.add_cone_block(_av(rd[-1:]), conic.ZERO)
    program.add_cone_block(_av(rd) - K * (_av(r[1:]) - _av(r[:-1])), conic.ZERO)
    program.add_cone_block(_av(rdd) - (K - 1) * (_av(rd[1:]) - _av(rd[:-1])), conic.ZERO)

    ones_v = np.ones(K)
    ones_a = np.ones(K - 1)
    program.add_cone_block(AffineVector.constant(v_fwd * ones_v) - _av(rd), conic.NONNEG)
    program.add_cone_block(_av(rd) + v_back * ones_v, conic.NONNEG)
    program.add_cone_block((_av(t) * a_fwd).outer(ones_a) - _av(rdd), conic.NONNEG)
    program.add_cone_block(_av(rdd) + (_av(t) * a_back).outer(ones_a), conic.NONNEG)
    program.add_cone_block(_av(s) - EPS_S, conic.NONNEG)
    program.add_cone_block([_av(t), _av(s), AffineVector.constant([np.sqrt(2.0)])], conic.RSOC)

    sol = conic.solve(program, backend)
    if sol.status != conic.OPTIMAL:
        raise SolverFailure(f"segment program ended with status {sol.status}")
    progress = sol.primal[r] / sol.primal[s[0]]
    control = p_a[None, :] + progress[:, None] * direction[None, :]
    return BezierCurve(control), float(sol.primal[t[0]])


def _vertex_to_vertex_nd(p_a, p_b, velocity_set, acceleration_set, K, backend):
    """Full n-dimensional variant, kept for cross-validating the 1-D path."""
    n = p_a.shape[0]
    program = ConicProgram()
    r = program.add_variables((K + 1) * n).reshape(K + 1, n)
    rd = program.add_variables(K * n).reshape(K, n)
    rdd = program.add_variables((K - 1) * n).reshape(K - 1, n)
    t = program.add_variables(1)
    s = program.add_variables(1)
    program.add_objective_term(t, 1.0)

    s_expr = _av(s)
    program.add_cone_block(_av(r[0]) - s_expr.outer(p_a), conic.ZERO)
    program.add_cone_block(_av(r[K]) - s_expr.outer(p_b), conic.ZERO)
    program.add_cone_block(_av(rd[0]), conic.ZERO)
    program.add_cone_block(_av(rd[K - 1]), conic.ZERO)
    program.add_cone_block(
        _av(rd.ravel()) - K * (_av(r[1:].ravel()) - _av(r[:-1].ravel())), conic.ZERO)
    program.add_cone_block(
        _av(rdd.ravel()) - (K - 1) * (_av(rd[1:].ravel()) - _av(rd[:-1].ravel())), conic.ZERO)

    one = AffineVector.constant([1.0])
    for k in range(K):
        for cone, rows in velocity_set.scaled_membership(_av(rd[k]), one):
            program.add_cone_block(rows, cone)
    for k in range(K - 1):
        for cone, rows in acceleration_set.scaled_membership(_av(rdd[k]), _av(t)):
            program.add_cone_block(rows, cone)
    program.add_cone_block(_av(s) - EPS_S, conic.NONNEG)
    program.add_cone_block([_av(t), _av(s), AffineVector.constant([np.sqrt(2.0)])], conic.RSOC)

    sol = conic.solve(program, backend)
    if sol.status != conic.OPTIMAL:
        raise SolverFailure(f"segment program ended with status {sol.status}")
    control = sol.primal[r] / sol.primal[s[0]]
    return BezierCurve(control), float(sol.primal[t[0]])


def _progress_curve(curve: BezierCurve) -> Tuple[np.ndarray, float, np.ndarray]:
    points = curve.control_points
    gap = points[-1] - points[0]
    length = float(np.linalg.norm(gap))
    if length < 1e-12:
        raise ValueError("curve endpoints coincide")
    direction = gap / length
    sigma = (points - points[0]) @ direction
    return sigma, length, direction


def _bisect_progress(sigma: BezierCurve, target: float, lo: float, hi: float) -> float:
    # Bracketing holds because sigma(lo) < target < sigma(hi).
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-15:
            break
        if float(sigma.evaluate(mid)[0]) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def split_segment(
    curve: BezierCurve,
    duration: float,
    interior_points: Sequence[np.ndarray],
    tol: float = 1e-7,
) -> List[Tuple[BezierCurve, float]]:
    """Cut a straight-line segment at the given on-line points.

    Each point fixes a split parameter through the scalar progress
    profile along the segment; parameter and time are related affinely,
    so a split at parameter s* divides the duration as (s*T, (1-s*)T).
    """
    interior_points = [np.asarray(p, dtype=float).ravel() for p in interior_points]
    if not interior_points:
        return [(curve, float(duration))]

    sigma_ctrl, length, direction = _progress_curve(curve)
    origin = curve.control_points[0]

    targets = []
    for p in interior_points:
        offset = p - origin
        along = float(offset @ direction)
        off_line = float(np.linalg.norm(offset - along * direction))
        if off_line > tol:
            raise ValueError(f"split point is {off_line:.3e} off the segment line")
        if not (tol < along < length - tol):
            raise ValueError("split points must lie strictly between the endpoints")
        targets.append(along)
    if any(b <= a for a, b in zip(targets, targets[1:])):
        raise ValueError("split points must be ordered along the segment")

    sigma_dot = np.diff(sigma_ctrl) * (len(sigma_ctrl) - 1)
    if np.min(sigma_dot) < -1e-9:
        warnings.warn(
            "progress profile is not certified monotone; "
            "falling back to a bracketing root search",
            RuntimeWarning,
        )

    sigma = BezierCurve(sigma_ctrl)
    pieces: List[Tuple[BezierCurve, float]] = []
    remaining = curve
    s_prev = 0.0
    for target in targets:
        s_star = _bisect_progress(sigma, target, s_prev, 1.0)
        local = (s_star - s_prev) / (1.0 - s_prev)
        if not (0.0 < local < 1.0):
            raise ValueError("split parameters collapsed; points too close together")
        left, remaining = remaining.split(local)
        pieces.append((left, (s_star - s_prev) * duration))
        s_prev = s_star
    pieces.append((remaining, (1.0 - s_prev) * duration))
    return pieces


def _allocate(program: ConicProgram, kind: str, I: int, K: int, n: int) -> TrajectoryLayout:
    position = np.empty((I, K + 1, n), dtype=np.int64)
    velocity = np.empty((I, K, n), dtype=np.int64)
    acceleration = np.empty((I, K - 1, n), dtype=np.int64)
    time = np.empty(I, dtype=np.int64)
    epigraph = np.empty(I, dtype=np.int64) if kind == FIXED_POINTS else None
    for i in range(I):
        position[i] = program.add_variables((K + 1) * n).reshape(K + 1, n)
        velocity[i] = program.add_variables(K * n).reshape(K, n)
        acceleration[i] = program.add_variables((K - 1) * n).reshape(K - 1, n)
        time[i] = program.add_variables(1)[0]
        if epigraph is not None:
            epigraph[i] = program.add_variables(1)[0]
    return TrajectoryLayout(kind, position, velocity, acceleration, time, epigraph)


def _add_difference_rows(program, layout, i, K):
    pos, vel, acc = layout.position[i], layout.velocity[i], layout.acceleration[i]
    program.add_cone_block(
        _av(vel.ravel()) - K * (_av(pos[1:].ravel()) - _av(pos[:-1].ravel())), conic.ZERO)
    program.add_cone_block(
        _av(acc.ravel()) - (K - 1) * (_av(vel[1:].ravel()) - _av(vel[:-1].ravel())), conic.ZERO)


def _add_memberships(program, set_, expr_points, lam):
    for point in expr_points:
        for cone, rows in set_.scaled_membership(point, lam):
            program.add_cone_block(rows, cone)


def build_fixed_velocity(
    problem: ProblemInstance,
    degree: int,
    velocities: np.ndarray,
    nominal_times: np.ndarray,
    zero_transition_acceleration: bool = False,
    min_traversal_time: float = 0.0,
) -> Tuple[ConicProgram, TrajectoryLayout]:
    """Restriction with the junction velocities held fixed.

    Position-level variables q_{i,k} and durations T_i. The squared
    durations in the acceleration constraint are underestimated by the
    tangent at the nominal durations, q_dd in Tbar(2T - Tbar)*A, which
    keeps the rows affine in T_i and conservative wherever 2T_i >= Tbar_i.
    """
    I, n, K = problem.num_sets, problem.dim, degree
    velocities, nominal_times = _check_transition_args(I, n, K, velocities, nominal_times)

    program = ConicProgram()
    layout = _allocate(program, FIXED_VELOCITY, I, K, n)
    program.add_objective_term(layout.time, 1.0)
    one = AffineVector.constant([1.0])

    program.add_cone_block(_av(layout.position[0, 0]) - problem.q_init, conic.ZERO)
    program.add_cone_block(_av(layout.position[I - 1, K]) - problem.q_term, conic.ZERO)
    program.add_cone_block(_av(layout.velocity[0, 0]), conic.ZERO)
    program.add_cone_block(_av(layout.velocity[I - 1, K - 1]), conic.ZERO)

    for i in range(I):
        t_i = _av(layout.time[i : i + 1])
        tbar = nominal_times[i]
        _add_difference_rows(program, layout, i, K)
        _add_memberships(
            program, problem.safe_sets[i], (_av(p) for p in layout.position[i]), one)
        _add_memberships(
            program, problem.velocity_set, (_av(p) for p in layout.velocity[i]), t_i)
        acc_scale = t_i * (2.0 * tbar) - tbar * tbar
        _add_memberships(
            program, problem.acceleration_set, (_av(p) for p in layout.acceleration[i]), acc_scale)
        program.add_cone_block(t_i * 2.0 - tbar, conic.NONNEG)
        if min_traversal_time > 0.0:
            program.add_cone_block(t_i - min_traversal_time, conic.NONNEG)
        if i < I - 1:
            t_next = _av(layout.time[i + 1 : i + 2])
            v_i = velocities[i]
            program.add_cone_block(
                _av(layout.position[i, K]) - _av(layout.position[i + 1, 0]), conic.ZERO)
            program.add_cone_block(
                _av(layout.velocity[i, K - 1]) - t_i.outer(v_i), conic.ZERO)
            program.add_cone_block(
                _av(layout.velocity[i + 1, 0]) - t_next.outer(v_i), conic.ZERO)
            if zero_transition_acceleration:
                program.add_cone_block(_av(layout.acceleration[i, K - 2]), conic.ZERO)
                program.add_cone_block(_av(layout.acceleration[i + 1, 0]), conic.ZERO)
    return program, layout


def build_fixed_points(
    problem: ProblemInstance,
    degree: int,
    points: np.ndarray,
    nominal_times: np.ndarray,
    zero_transition_acceleration: bool = False,
    min_traversal_time: float = 0.0,
) -> Tuple[ConicProgram, TrajectoryLayout]:
    """Restriction with the junction points held fixed.

    Velocity-level variables r_{i,k} = q_{i,k}/T_i and duration
    reciprocals S_i. The objective sum of 1/S_i enters through epigraph
    variables u_i with rotated-cone rows u_i * S_i >= 1. The 1/S_i in
    the acceleration constraint is underestimated by its tangent at the
    nominal durations, r_dd in Tbar(2 - Tbar*S)*A.
    """
    I, n, K = problem.num_sets, problem.dim, degree
    points, nominal_times = _check_transition_args(I, n, K, points, nominal_times)

    program = ConicProgram()
    layout = _allocate(program, FIXED_POINTS, I, K, n)
    program.add_objective_term(layout.epigraph, 1.0)
    one = AffineVector.constant([1.0])
    sqrt2 = AffineVector.constant([np.sqrt(2.0)])

    s_first = _av(layout.time[0:1])
    s_last = _av(layout.time[I - 1 : I])
    program.add_cone_block(
        _av(layout.position[0, 0]) - s_first.outer(problem.q_init), conic.ZERO)
    program.add_cone_block(
        _av(layout.position[I - 1, K]) - s_last.outer(problem.q_term), conic.ZERO)
    program.add_cone_block(_av(layout.velocity[0, 0]), conic.ZERO)
    program.add_cone_block(_av(layout.velocity[I - 1, K - 1]), conic.ZERO)

    for i in range(I):
        s_i = _av(layout.time[i : i + 1])
        u_i = _av(layout.epigraph[i : i + 1])
        tbar = nominal_times[i]
        _add_difference_rows(program, layout, i, K)
        _add_memberships(
            program, problem.safe_sets[i], (_av(p) for p in layout.position[i]), s_i)
        _add_memberships(
            program, problem.velocity_set, (_av(p) for p in layout.velocity[i]), one)
        acc_scale = s_i * (-tbar * tbar) + 2.0 * tbar
        _add_memberships(
            program, problem.acceleration_set, (_av(p) for p in layout.acceleration[i]), acc_scale)
        program.add_cone_block(s_i - EPS_S, conic.NONNEG)
        program.add_cone_block(2.0 - s_i * tbar, conic.NONNEG)
        if min_traversal_time > 0.0:
            program.add_cone_block(1.0 / min_traversal_time - s_i, conic.NONNEG)
        program.add_cone_block([u_i, s_i, sqrt2], conic.RSOC)
        if i < I - 1:
            s_next = _av(layout.time[i + 1 : i + 2])
            p_i = points[i]
            program.add_cone_block(
                _av(layout.position[i, K]) - s_i.outer(p_i), conic.ZERO)
            program.add_cone_block(
                _av(layout.position[i + 1, 0]) - s_next.outer(p_i), conic.ZERO)
            program.add_cone_block(
                _av(layout.velocity[i, K - 1]) - _av(layout.velocity[i + 1, 0]), conic.ZERO)
            if zero_transition_acceleration:
                program.add_cone_block(_av(layout.acceleration[i, K - 2]), conic.ZERO)
                program.add_cone_block(_av(layout.acceleration[i + 1, 0]), conic.ZERO)
    return program, layout


def _check_transition_args(I, n, K, junction_data, nominal_times):
    if K < 3:
        raise ValueError("curve degree must be at least 3")
    junction_data = np.asarray(junction_data, dtype=float).reshape(I - 1, n) \
        if I > 1 else np.zeros((0, n))
    nominal_times = np.asarray(nominal_times, dtype=float).ravel()
    if nominal_times.shape[0] != I:
        raise ValueError(f"expected {I} nominal durations")
    if np.any(nominal_times <= 0):
        raise ValueError("nominal durations must be positive")
    return junction_data, nominal_times


def decode_trajectory(layout: TrajectoryLayout, solution: conic.Solution) -> Trajectory:
    """Turn an optimal alternation solution back into a trajectory.

    Fixed-points solutions are rescaled by the recovered durations,
    q_{i,k} = r_{i,k} / S_i.
    """
    if solution.status != conic.OPTIMAL:
        raise SolverFailure(f"subproblem ended with status {solution.status}")
    x = solution.primal
    if layout.kind == FIXED_VELOCITY:
        durations = x[layout.time]
        control = x[layout.position]
    else:
        reciprocals = x[layout.time]
        if np.any(reciprocals < EPS_S):
            raise DegenerateTimeError(
                "a duration reciprocal hit its positivity floor; "
                "the instance likely needs a minimum traversal time")
        durations = 1.0 / reciprocals
        control = x[layout.position] * durations[:, None, None]
    return Trajectory(
        [(BezierCurve(control[i]), durations[i]) for i in range(control.shape[0])])


def encode_trajectory(layout: TrajectoryLayout, trajectory: Trajectory) -> np.ndarray:
    """Primal vector whose coordinates reproduce the given trajectory.

    The inverse of decode_trajectory on the layout's variables; used to
    verify that a restriction admits its own incumbent.
    """
    I, K = layout.position.shape[0], layout.position.shape[1] - 1
    num_vars = int(
        max(arr.max() for arr in (layout.position, layout.velocity, layout.acceleration,
                                  layout.time) if arr.size)) + 1
    if layout.epigraph is not None:
        num_vars = max(num_vars, int(layout.epigraph.max()) + 1)
    x = np.zeros(num_vars)
    for i, (curve, T) in enumerate(trajectory.segments):
        vel = curve.derivative()
        acc = vel.derivative()
        if layout.kind == FIXED_VELOCITY:
            x[layout.position[i]] = curve.control_points
            x[layout.velocity[i]] = vel.control_points
            x[layout.acceleration[i]] = acc.control_points
            x[layout.time[i]] = T
        else:
            x[layout.position[i]] = curve.control_points / T
            x[layout.velocity[i]] = vel.control_points / T
            x[layout.acceleration[i]] = acc.control_points / T
            x[layout.time[i]] = 1.0 / T
            x[layout.epigraph[i]] = T
    return x
