"""Curve primitives in isolation: evaluation, derivatives, subdivision.

Everything the trajectory layer relies on is visible here: endpoint
interpolation, the convex hull of the control points containing the
curve, derivative curves one degree down, and exact splitting.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mintime import BezierCurve

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

curve = BezierCurve([[0.0, 0.0], [0.5, 1.6], [1.6, 1.8], [2.3, 0.4], [3.0, 1.0]])
print(f"degree {curve.degree} curve in R^{curve.dim}")
print("start:", curve.evaluate(0.0), " end:", curve.evaluate(1.0))

velocity = curve.derivative()
print("derivative degree:", velocity.degree)
h = 1e-6
s = 0.37
central = (curve.evaluate(s + h) - curve.evaluate(s - h)) / (2 * h)
print("derivative check at s=0.37:", velocity.evaluate(s), "vs", central)

left, right = curve.split(0.6)
print("split apex:", left.evaluate(1.0), "=", right.evaluate(0.0))

grid = np.linspace(0.0, 1.0, 200)
fig, ax = plt.subplots(figsize=(6, 4.5))
pts = curve.control_points
ax.plot(pts[:, 0], pts[:, 1], "o--", c="gray", label="control points")
ax.fill(pts[np.array([0, 1, 2, 4, 3, 0]), 0],
        pts[np.array([0, 1, 2, 4, 3, 0]), 1], alpha=0.1, c="gray")
q = curve.evaluate(grid)
ax.plot(q[:, 0], q[:, 1], "k", lw=1, alpha=0.5, label="curve")
ql = left.evaluate(grid)
qr = right.evaluate(grid)
ax.plot(ql[:, 0], ql[:, 1], "tab:blue", lw=2.5, label="left of s=0.6")
ax.plot(qr[:, 0], qr[:, 1], "tab:orange", lw=2.5, label="right of s=0.6")
ax.legend()
ax.set_title("De Casteljau evaluation and subdivision")
fig.tight_layout()
fig.savefig(OUT / "bezier.png", dpi=130)
print(f"wrote {OUT / 'bezier.png'}")
