"""Quickstart: plan a minimum-time motion through an L-shaped corridor.

Builds a two-box corridor by hand, solves it, prints the refinement
history, and saves a picture plus a dense CSV sample of the result.
"""

import csv
import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mintime import Ball, HPolytope, ProblemInstance, SolverConfig
from mintime import check_feasibility, solve, validate

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def box(x_lo, x_hi, y_lo, y_hi):
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    return HPolytope(A, [x_hi, -x_lo, y_hi, -y_lo])


# An L-shaped corridor: a long horizontal box into a tall vertical one.
problem = ProblemInstance(
    safe_sets=[box(-0.25, 2.0, -0.25, 0.25), box(1.5, 2.0, -0.25, 2.0)],
    q_init=[0.0, 0.0],
    q_term=[1.75, 1.5],
    velocity_set=Ball([0.0, 0.0], 0.8),
    acceleration_set=Ball([0.0, 0.0], 1.0),
)

config = SolverConfig(degree=5, tolerance=0.01)
report_v = validate(problem, config)
print("validation:", "ok" if report_v.ok else report_v.violations)

result = solve(problem, config)
print(f"initialization: {result.initialization_objective:.4f} s")
for i, rec in enumerate(result.records, start=1):
    print(f"  subproblem {i} ({rec.kind}): {rec.objective:.4f} s")
print(f"final duration: {result.objective:.4f} s ({result.termination})")

feas = check_feasibility(result.trajectory, problem)
print(f"certificate feasible: {feas.certificate_ok} "
      f"(worst acceleration residual {feas.certificate_acceleration:.2e})")

# Dense sample to CSV: time, position, velocity, acceleration.
trajectory = result.trajectory
times = np.linspace(0.0, trajectory.duration, 200)
with open(OUT / "corridor_samples.csv", "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["t", "qx", "qy", "vx", "vy", "ax", "ay"])
    for t in times:
        writer.writerow([t, *trajectory.position(t),
                         *trajectory.velocity(t), *trajectory.acceleration(t)])

fig, (ax_path, ax_speed) = plt.subplots(1, 2, figsize=(10, 4))
for safe_set in problem.safe_sets:
    x_hi, x_lo, y_hi, y_lo = safe_set.b[0], -safe_set.b[1], safe_set.b[2], -safe_set.b[3]
    ax_path.add_patch(plt.Rectangle((x_lo, y_lo), x_hi - x_lo, y_hi - y_lo,
                                    alpha=0.2, color="tab:green"))
path = np.array([trajectory.position(t) for t in times])
ax_path.plot(path[:, 0], path[:, 1], "tab:blue")
ax_path.plot(*problem.q_init, "ko")
ax_path.plot(*problem.q_term, "k*")
ax_path.set_aspect("equal")
ax_path.set_title(f"minimum-time path, T = {trajectory.duration:.3f} s")

speed = np.array([np.linalg.norm(trajectory.velocity(t)) for t in times])
accel = np.array([np.linalg.norm(trajectory.acceleration(t)) for t in times])
ax_speed.plot(times, speed, label="|velocity|")
ax_speed.plot(times, accel, label="|acceleration|")
ax_speed.axhline(problem.velocity_set.radius, ls="--", c="tab:blue", alpha=0.5)
ax_speed.axhline(problem.acceleration_set.radius, ls="--", c="tab:orange", alpha=0.5)
ax_speed.set_xlabel("time [s]")
ax_speed.legend()
fig.tight_layout()
fig.savefig(OUT / "corridor.png", dpi=130)
print(f"wrote {OUT / 'corridor.png'} and {OUT / 'corridor_samples.csv'}")
