"""Parametric staircase instances and scaling/quality sweeps.

The staircase walks the standard basis directions in round-robin order,
one unit step per safe set. Each set is a polytopic outer approximation
of an ellipsoid hugging its step: full length 4/3 along the step, 1/3
across. Endpoints sit at the staircase ends, and the velocity and
acceleration sets are origin-centered balls of radius 10 and 1.
"""

from __future__ import annotations

import csv
import time as _time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import solver
from .geometry import Ball, ellipsoid_tangent_polytope
from .problem import ProblemInstance, SolverConfig

MAIN_SEMI_AXIS = 2.0 / 3.0
CROSS_SEMI_AXIS = 1.0 / 6.0

SWEEP_KEYS = ("sets", "facets", "dim", "degree")

CSV_HEADER = ("I", "m", "n", "K", "epsilon", "objective",
              "subproblems", "wall_ms", "max_residual")


@dataclass(frozen=True)
class StaircaseSpec:
    num_sets: int
    facets: int
    dimension: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.num_sets < 1:
            raise ValueError("need at least one safe set")
        if self.dimension < 2:
            raise ValueError("staircase needs dimension at least 2")
        if self.facets < self.dimension + 1:
            raise ValueError("facet count cannot bound the ellipsoids")


@dataclass
class BenchRecord:
    num_sets: int
    facets: int
    dimension: int
    degree: int
    epsilon: float
    objective: float
    subproblems: int
    wall_ms: float
    max_residual: float
    termination: str

    def csv_row(self) -> Tuple:
        return (self.num_sets, self.facets, self.dimension, self.degree,
                self.epsilon, self.objective, self.subproblems,
                self.wall_ms, self.max_residual)


def staircase_points(num_sets: int, dimension: int) -> np.ndarray:
    """Corner points x_0 = 0, x_i = x_{i-1} + e_{(i-1) mod n}."""
    points = np.zeros((num_sets + 1, dimension))
    for i in range(1, num_sets + 1):
        points[i] = points[i - 1]
        points[i, (i - 1) % dimension] += 1.0
    return points


def staircase_instance(spec: StaircaseSpec) -> ProblemInstance:
    n = spec.dimension
    points = staircase_points(spec.num_sets, n)
    semi_axes = np.full(n, CROSS_SEMI_AXIS)
    semi_axes[0] = MAIN_SEMI_AXIS
    sets = []
    for i in range(spec.num_sets):
        axis = i % n
        center = 0.5 * (points[i] + points[i + 1])
        frame = np.eye(n)[:, [axis] + [j for j in range(n) if j != axis]]
        sets.append(ellipsoid_tangent_polytope(center, semi_axes, frame, spec.facets,
                                               seed=spec.seed))
    return ProblemInstance(
        sets, points[0], points[-1], Ball(np.zeros(n), 10.0), Ball(np.zeros(n), 1.0))


def run_instance(spec: StaircaseSpec, config: SolverConfig) -> BenchRecord:
    """Generate, validate, solve, and summarize one staircase instance.

    Wall time covers the solve only (all conic programs included); the
    instance generation and validation stay outside the clock.
    """
    problem = staircase_instance(spec)
    check = replace(config, assumption1_check=spec.num_sets >= 3)
    report = solver.validate(problem, check)
    if not report.ok:
        return BenchRecord(spec.num_sets, spec.facets, spec.dimension, config.degree,
                           config.tolerance, float("nan"), 0, 0.0, float("nan"),
                           "validation-failed: " + "; ".join(report.violations))
    t0 = _time.perf_counter()
    try:
        result = solver.solve(problem, config)
    except solver.InitializationError as err:
        return BenchRecord(spec.num_sets, spec.facets, spec.dimension, config.degree,
                           config.tolerance, float("nan"), 0, 0.0, float("nan"),
                           f"initialization-failed: {err}")
    wall_ms = 1e3 * (_time.perf_counter() - t0)
    feas = solver.check_feasibility(result.trajectory, problem)
    max_residual = max(feas.boundary, feas.certificate_position,
                       feas.certificate_velocity, feas.certificate_acceleration)
    return BenchRecord(spec.num_sets, spec.facets, spec.dimension, config.degree,
                       config.tolerance, result.objective, result.num_subproblems,
                       wall_ms, max_residual, result.termination)


def _sweep_point(sweep: str, value: int, fixed: Dict) -> Tuple[StaircaseSpec, SolverConfig]:
    params = {"sets": int(fixed.get("sets", 20)),
              "facets": fixed.get("facets"),
              "dim": int(fixed.get("dim", 3)),
              "degree": int(fixed.get("degree", 3))}
    params[sweep] = int(value)
    if params["facets"] is None:
        params["facets"] = 2 * params["dim"]
    spec = StaircaseSpec(params["sets"], int(params["facets"]), params["dim"],
                         int(fixed.get("seed", 0)))
    config = SolverConfig(degree=params["degree"],
                          tolerance=float(fixed.get("epsilon", 0.01)))
    return spec, config


def _run_point(args) -> BenchRecord:
    spec, config = args
    return run_instance(spec, config)


def run_suite(
    sweep: str,
    values: Sequence[int],
    fixed: Optional[Dict] = None,
    jobs: int = 1,
) -> Tuple[List[BenchRecord], Dict]:
    """Solve one staircase instance per sweep value and summarize.

    `sweep` picks which of {sets, facets, dim, degree} varies; the rest
    come from `fixed` (defaults I=20, m=2n, n=3, K=3, epsilon=0.01).
    Per-instance failures are recorded and the suite continues.
    """
    if sweep not in SWEEP_KEYS:
        raise ValueError(f"sweep must be one of {SWEEP_KEYS}")
    values = list(values)
    if values != sorted(values):
        raise ValueError("sweep values must be sorted ascending")
    points = [_sweep_point(sweep, v, fixed or {}) for v in values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_point, points))
    else:
        records = [_run_point(p) for p in points]

    ratios = []
    for a, b in zip(records[:-1], records[1:]):
        ratios.append(b.wall_ms / a.wall_ms if a.wall_ms > 0 else float("nan"))
    counts = [r.subproblems for r in records if r.subproblems > 0]
    summary = {
        "sweep": sweep,
        "values": values,
        "runtime_ratios": ratios,
        "subproblem_range": (min(counts), max(counts)) if counts else (0, 0),
    }
    return records, summary


def write_records_csv(records: Sequence[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record.csv_row())
