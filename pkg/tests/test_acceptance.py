"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict
lines; the whole suite takes on the order of a minute.
"""

import time

import numpy as np
import pytest

from mintime import bench, solver
from mintime.bench import StaircaseSpec, staircase_instance, run_suite
from mintime.geometry import Ball
from mintime.problem import SolverConfig
from mintime.subproblems import FIXED_POINTS, FIXED_VELOCITY, solve_vertex_to_vertex


def _verdict(ok: bool, label: str, detail: str = "") -> None:
    state = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{state}] {label}{suffix}")
    assert ok, f"{label}{suffix}"


@pytest.fixture(scope="module")
def random_staircase_batch():
    """100 seeded random instances, solved once and reused across criteria."""
    rng = np.random.default_rng(12345)
    results = []
    t0 = time.perf_counter()
    for trial in range(100):
        I = int(rng.integers(3, 21))
        n = int(rng.choice([2, 3, 4]))
        m = int(rng.choice([2 * n, 2 * n + 4]))
        K = int(rng.choice([3, 5]))
        problem = staircase_instance(StaircaseSpec(I, m, n, seed=trial))
        report = solver.solve(problem, SolverConfig(degree=K))
        results.append((problem, report))
    elapsed = time.perf_counter() - t0
    return results, elapsed


def test_criterion_1_feasibility_certificate(random_staircase_batch):
    results, elapsed = random_staircase_batch
    failures = []
    for idx, (problem, report) in enumerate(results):
        if report.termination != solver.TOLERANCE_MET:
            failures.append(f"instance {idx}: {report.termination}")
            continue
        feas = solver.check_feasibility(report.trajectory, problem, tol=1e-6)
        if not feas.certificate_ok:
            failures.append(f"instance {idx}: certificate residual too large")
    ok = not failures and elapsed < 60.0
    _verdict(ok, "criterion 1: feasibility certificate on 100 random staircases",
             f"{len(failures)} failures, {elapsed:.1f} s total")


def test_criterion_2_monotonicity(random_staircase_batch):
    results, _ = random_staircase_batch
    bad = []
    for idx, (_, report) in enumerate(results):
        for kind in (FIXED_POINTS, FIXED_VELOCITY):
            seq = [r.objective for r in report.records if r.kind == kind]
            if any(b > a + 1e-7 for a, b in zip(seq, seq[1:])):
                bad.append(f"instance {idx}: {kind} sequence increased")
        if not report.objective < report.initialization_objective:
            bad.append(f"instance {idx}: no improvement over initialization")
    _verdict(not bad, "criterion 2: per-kind monotonicity and strict improvement",
             f"{len(bad)} violations")


def test_criterion_3_iteration_counts():
    records, _ = run_suite("sets", [3, 10, 30, 100],
                           {"dim": 3, "facets": 6, "degree": 3})
    counts = [r.subproblems for r in records]
    in_range = all(3 <= c <= 12 for c in counts)
    all_met = all(r.termination == solver.TOLERANCE_MET for r in records)

    degree_records, _ = run_suite("degree", list(range(3, 11)),
                                  {"sets": 20, "dim": 3, "facets": 6})
    degree_counts = [r.subproblems for r in degree_records]
    constant = len(set(degree_counts)) == 1
    degree_met = all(r.termination == solver.TOLERANCE_MET for r in degree_records)

    ok = in_range and all_met and constant and degree_met
    _verdict(ok, "criterion 3: subproblem counts",
             f"set sweep {counts}, degree sweep {degree_counts}")


def _median_wall_ms(spec: StaircaseSpec, config: SolverConfig, runs: int = 3) -> float:
    samples = []
    for _ in range(runs):
        samples.append(bench.run_instance(spec, config).wall_ms)
    return float(np.median(samples))


def test_criterion_4_runtime_scaling():
    config = SolverConfig(degree=3)
    t3 = _median_wall_ms(StaircaseSpec(3, 6, 3), config)
    t300 = _median_wall_ms(StaircaseSpec(300, 6, 3), config)
    sets_ratio = t300 / t3

    k3 = _median_wall_ms(StaircaseSpec(20, 6, 3), SolverConfig(degree=3))
    k30 = _median_wall_ms(StaircaseSpec(20, 6, 3), SolverConfig(degree=30))
    degree_ratio = k30 / k3

    ok = sets_ratio <= 250.0 and degree_ratio <= 15.0
    _verdict(ok, "criterion 4: runtime scaling",
             f"sets 3->300: {sets_ratio:.1f}x (<=250), degree 3->30: {degree_ratio:.1f}x (<=15)")


def test_criterion_5_segment_oracle():
    velocity = Ball([0.0, 0.0], 1e3)
    cubic_ok = True
    for distance, accel in ((1.0, 1.0), (2.5, 1.0), (1.0, 4.0), (0.3, 0.7)):
        _, T = solve_vertex_to_vertex(
            [0.0, 0.0], [distance, 0.0], velocity, Ball([0.0, 0.0], accel), 3)
        expect = np.sqrt(6.0 * distance / accel)
        cubic_ok = cubic_ok and abs(T - expect) <= 1e-5 * expect

    quintic_ok = True
    for distance, accel in ((1.0, 1.0), (2.5, 0.5)):
        _, T = solve_vertex_to_vertex(
            [0.0, 0.0], [distance, 0.0], velocity, Ball([0.0, 0.0], accel), 5)
        low = 2.0 * np.sqrt(distance / accel)
        high = 1.25 * np.sqrt(6.0 * distance / accel)
        quintic_ok = quintic_ok and (low <= T <= high)

    _verdict(cubic_ok and quintic_ok, "criterion 5: straight-segment duration oracle",
             "cubic closed form and quintic bracket")


def test_criterion_6_refinement_consistency():
    problem = staircase_instance(StaircaseSpec(5, 4, 2))
    loose = solver.solve(problem, SolverConfig(degree=5, tolerance=0.01))
    tight = solver.solve(problem, SolverConfig(
        degree=5, tolerance=1e-4, max_subproblems=300))
    gap = (loose.objective - tight.objective) / tight.objective
    ok = (loose.termination == solver.TOLERANCE_MET
          and tight.termination == solver.TOLERANCE_MET
          and gap <= 0.03)
    _verdict(ok, "criterion 6: default tolerance lands near the refined objective",
             f"gap {100 * gap:.2f}% (<=3%)")


def test_criterion_7_qualitative_signature():
    problem = staircase_instance(StaircaseSpec(5, 4, 2))
    report = solver.solve(problem, SolverConfig(degree=5))
    objectives = [r.objective for r in report.records]
    first_is_points = report.records[0].kind == FIXED_POINTS
    descending_start = (report.initialization_objective > objectives[0]
                        > objectives[1] > objectives[2])
    few = report.num_subproblems <= 8
    ok = first_is_points and descending_start and few
    seq = " > ".join(f"{v:.2f}" for v in
                     [report.initialization_objective] + objectives[:3])
    _verdict(ok, "criterion 7: qualitative refinement signature",
             f"{seq}, {report.num_subproblems} subproblems")
