"""The initialization pipeline, stage by stage.

Shows how the first feasible trajectory is assembled for a staircase
instance: shortest polygonal path, corner selection, minimum-time
straight segments between corners, and subdivision back to one piece
per safe set. The full-stop corners make this trajectory easy to
construct but clearly suboptimal; the alternation then smooths them.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Polygon as MplPolygon

from mintime import SolverConfig, StaircaseSpec, solve, staircase_instance
from mintime import conic
from mintime.subproblems import (
    build_polygonal, decode_polygonal, select_vertices,
    solve_vertex_to_vertex, split_segment)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

problem = staircase_instance(StaircaseSpec(num_sets=5, facets=4, dimension=2))
degree = 5

# Stage 1: shortest polygonal path through the safe-set overlaps.
program, layout = build_polygonal(problem)
points = decode_polygonal(layout, conic.solve(program))
print("polygonal points:")
for i, p in enumerate(points):
    print(f"  p_{i} = ({p[0]: .4f}, {p[1]: .4f})")

# Stage 2: keep only the corners (plus both endpoints).
vertices = select_vertices(points)
print(f"vertex indices: {vertices}")

# Stage 3: a minimum-time straight segment per consecutive corner pair,
# stopping at each corner; stage 4 cuts them at skipped transitions.
segments = []
for a, b in zip(vertices[:-1], vertices[1:]):
    curve, duration = solve_vertex_to_vertex(
        points[a], points[b], problem.velocity_set,
        problem.acceleration_set, degree)
    interior = [points[j] for j in range(a + 1, b)]
    pieces = split_segment(curve, duration, interior)
    print(f"  corners {a}->{b}: {duration:.4f} s in {len(pieces)} piece(s)")
    segments.extend(pieces)

total = sum(T for _, T in segments)
print(f"initialization duration: {total:.4f} s over {len(segments)} segments")

# The alternation then improves the full-stop trajectory.
result = solve(problem, SolverConfig(degree=degree))
print(f"after refinement: {result.objective:.4f} s "
      f"in {result.num_subproblems} subproblems")

fig, ax = plt.subplots(figsize=(6, 5))
for safe_set in problem.safe_sets:
    # trace the polytope boundary by intersecting consecutive facets
    angles = np.arctan2(safe_set.A[:, 1], safe_set.A[:, 0])
    order = np.argsort(angles)
    corners = []
    for j in range(len(order)):
        a1, b1 = safe_set.A[order[j]], safe_set.b[order[j]]
        a2, b2 = safe_set.A[order[(j + 1) % len(order)]], safe_set.b[order[(j + 1) % len(order)]]
        corners.append(np.linalg.solve(np.vstack([a1, a2]), [b1, b2]))
    ax.add_patch(MplPolygon(corners, alpha=0.15, color="tab:green"))
ax.plot(points[:, 0], points[:, 1], "ko--", ms=4, lw=1, label="polygonal")
grid = np.linspace(0.0, 1.0, 40)
for curve, _ in segments:
    q = curve.evaluate(grid)
    ax.plot(q[:, 0], q[:, 1], "tab:orange", lw=2)
final = result.trajectory
times = np.linspace(0.0, final.duration, 300)
q = np.array([final.position(t) for t in times])
ax.plot(q[:, 0], q[:, 1], "tab:blue", lw=2, label="refined")
ax.plot([], [], "tab:orange", lw=2, label="initialization")
ax.set_aspect("equal")
ax.legend()
ax.set_title("staircase: initialization vs refined trajectory")
fig.tight_layout()
fig.savefig(OUT / "initialization.png", dpi=130)
print(f"wrote {OUT / 'initialization.png'}")
