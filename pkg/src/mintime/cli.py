"""Command-line entry points and the on-disk formats.

Problems and trajectories are versioned JSON; samples and benchmark
records are CSV. Exit codes: 0 success, 1 validation or tolerance
failure, 2 usage or parse error, 3 anytime fallback (a feasible
trajectory was written, but a backend failure stopped the refinement).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import List, Optional

import numpy as np

from . import bench, solver
from .bezier import BezierCurve
from .geometry import Ball, ConvexSet, HPolytope
from .problem import ProblemInstance, SolverConfig
from .trajectory import Trajectory

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_ANYTIME = 3


class FileFormatError(ValueError):
    pass


def _check_version(data, path):
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise FileFormatError(
            f"{path}: file version {version!r} not supported (expected {FORMAT_VERSION})")


def set_to_json(s: ConvexSet) -> dict:
    if isinstance(s, HPolytope):
        return {"type": "polytope", "A": s.A.tolist(), "b": s.b.tolist()}
    if isinstance(s, Ball):
        return {"type": "ball", "center": s.center.tolist(), "radius": s.radius}
    raise TypeError(f"cannot serialize set type {type(s).__name__}")


def set_from_json(data: dict) -> ConvexSet:
    kind = data.get("type")
    if kind == "polytope":
        return HPolytope(data["A"], data["b"])
    if kind == "ball":
        return Ball(data["center"], data["radius"])
    raise FileFormatError(f"unknown set type {kind!r}")


def save_problem(problem: ProblemInstance, path) -> None:
    data = {
        "version": FORMAT_VERSION,
        "dimension": problem.dim,
        "sets": [set_to_json(s) for s in problem.safe_sets],
        "q_init": problem.q_init.tolist(),
        "q_term": problem.q_term.tolist(),
        "velocity_set": set_to_json(problem.velocity_set),
        "acceleration_set": set_to_json(problem.acceleration_set),
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)


def load_problem(path) -> ProblemInstance:
    with open(path) as fh:
        data = json.load(fh)
    _check_version(data, path)
    problem = ProblemInstance(
        [set_from_json(s) for s in data["sets"]],
        data["q_init"], data["q_term"],
        set_from_json(data["velocity_set"]),
        set_from_json(data["acceleration_set"]))
    if problem.dim != data.get("dimension"):
        raise FileFormatError(f"{path}: declared dimension disagrees with the data")
    return problem


def save_trajectory(trajectory: Trajectory, path) -> None:
    data = {
        "version": FORMAT_VERSION,
        "degree": trajectory.segments[0][0].degree,
        "segments": [
            {"duration": T, "control_points": curve.control_points.tolist()}
            for curve, T in trajectory.segments
        ],
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)


def load_trajectory(path) -> Trajectory:
    with open(path) as fh:
        data = json.load(fh)
    _check_version(data, path)
    segments = [
        (BezierCurve(seg["control_points"]), float(seg["duration"]))
        for seg in data["segments"]
    ]
    return Trajectory(segments)


def save_report(report: solver.SolveReport, path) -> None:
    data = {
        "version": FORMAT_VERSION,
        "termination": report.termination,
        "objective": report.objective,
        "initialization_objective": report.initialization_objective,
        "initialization_time": report.initialization_time,
        "iterations": [
            {"kind": r.kind, "objective": r.objective,
             "wall_time": r.wall_time, "status": r.status}
            for r in report.records
        ],
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)


def cmd_validate(args) -> int:
    problem = load_problem(args.problem)
    config = SolverConfig(assumption1_check=args.assumption1)
    report = solver.validate(problem, config)
    if report.ok:
        checked = "with" if args.assumption1 else "without"
        print(f"ok: {problem.num_sets} sets in dimension {problem.dim}, "
              f"all checks passed ({checked} the positive-traversal condition)")
        return EXIT_OK
    for line in report.violations:
        print(f"violation: {line}")
    return EXIT_FAILED


def cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    config = SolverConfig(
        degree=args.degree,
        tolerance=args.tol,
        min_traversal_time=args.min_time,
        zero_transition_acceleration=args.zero_accel,
    )
    try:
        report = solver.solve(problem, config)
    except solver.InitializationError as err:
        print(f"initialization failed: {err}", file=sys.stderr)
        return EXIT_FAILED
    if args.out:
        save_trajectory(report.trajectory, args.out)
    if args.report:
        save_report(report, args.report)
    print(f"{report.termination}: duration {report.objective:.6g} after "
          f"{report.num_subproblems} subproblems "
          f"(initialization {report.initialization_objective:.6g})")
    if report.termination == solver.TOLERANCE_MET:
        return EXIT_OK
    if report.termination == solver.BACKEND_FAILURE:
        return EXIT_ANYTIME
    return EXIT_FAILED


def cmd_sample(args) -> int:
    trajectory = load_trajectory(args.trajectory)
    T = trajectory.duration
    if args.count is not None:
        if args.count < 2:
            raise FileFormatError("need at least 2 samples to include both endpoints")
        times = np.linspace(0.0, T, args.count)
    else:
        times = np.arange(0.0, T, args.dt)
        if not np.isclose(times[-1], T):
            times = np.append(times, T)
    n = trajectory.dim
    header = (["t"] + [f"q{i}" for i in range(n)]
              + [f"v{i}" for i in range(n)] + [f"a{i}" for i in range(n)])
    with open(args.csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in times:
            row = np.concatenate([[t], trajectory.position(t),
                                  trajectory.velocity(t), trajectory.acceleration(t)])
            writer.writerow([repr(float(v)) for v in row])
    print(f"wrote {len(times)} samples to {args.csv}")
    return EXIT_OK


def cmd_bench(args) -> int:
    fixed = {"seed": args.seed}
    for item in args.fixed or []:
        key, _, value = item.partition("=")
        if key not in ("sets", "facets", "dim", "degree", "epsilon", "seed"):
            raise FileFormatError(f"unknown fixed key {key!r}")
        fixed[key] = float(value) if key == "epsilon" else int(value)
    values = [int(v) for v in args.values.split(",")]
    records, summary = bench.run_suite(args.sweep, values, fixed, jobs=args.jobs)
    if args.csv:
        bench.write_records_csv(records, args.csv)
    lo, hi = summary["subproblem_range"]
    print(f"sweep {args.sweep} over {values}: subproblems in [{lo}, {hi}]")
    for value, record in zip(values, records):
        print(f"  {args.sweep}={value}: objective {record.objective:.6g}, "
              f"{record.subproblems} subproblems, {record.wall_ms:.1f} ms "
              f"({record.termination})")
    if len(values) > 1:
        ratios = ", ".join(f"{r:.2f}" for r in summary["runtime_ratios"])
        print(f"  consecutive runtime ratios: {ratios}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mintime",
        description="Minimum-time trajectories through a sequence of convex sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a problem file")
    p.add_argument("problem")
    p.add_argument("--assumption1", action="store_true",
                   help="also check the sufficient condition for positive traversal times")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("problem")
    p.add_argument("--degree", type=int, default=5, help="Bezier degree, at least 3")
    p.add_argument("--tol", type=float, default=0.01,
                   help="relative objective-decrease termination tolerance")
    p.add_argument("--min-time", type=float, default=0.0, dest="min_time",
                   help="lower bound on every traversal time")
    p.add_argument("--zero-accel", action="store_true", dest="zero_accel",
                   help="pin the acceleration to zero at every transition")
    p.add_argument("--out", help="trajectory output path (JSON)")
    p.add_argument("--report", help="per-iteration report output path (JSON)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sample", help="sample a trajectory file to CSV")
    p.add_argument("trajectory")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dt", type=float, help="time step")
    group.add_argument("--count", type=int, help="number of uniform samples")
    p.add_argument("--csv", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bench", help="run a staircase sweep")
    p.add_argument("--sweep", required=True, choices=bench.SWEEP_KEYS)
    p.add_argument("--values", required=True, help="comma-separated sweep values")
    p.add_argument("--fixed", action="append", metavar="KEY=VAL",
                   help="fix another parameter (sets, facets, dim, degree, epsilon, seed)")
    p.add_argument("--csv", help="output CSV path")
    p.add_argument("--seed", type=int, default=0, help="direction-sampling seed")
    p.add_argument("--jobs", type=int, default=1, help="parallel instances")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, json.JSONDecodeError, FileFormatError,
            KeyError, TypeError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
