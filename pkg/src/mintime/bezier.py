"""Bernstein-basis and Bezier-curve primitives.

Evaluation and subdivision both use the De Casteljau recurrence, which
is numerically stable at high degree where the monomial form is not.
"""

from __future__ import annotations

from typing import Tuple, Union

import numpy as np


def binomial(K: int, k: int) -> float:
    """C(K, k) by multiplicative recurrence; exact in floats for K <= 30."""
    k = min(k, K - k)
    out = 1.0
    for j in range(1, k + 1):
        out = out * (K - k + j) / j
    return out


def bernstein(K: int, k: int, s: float) -> float:
    """Basis polynomial C(K,k) s^k (1-s)^(K-k) on [0, 1]."""
    if not (0 <= k <= K):
        raise ValueError(f"need 0 <= k <= K, got k={k}, K={K}")
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"parameter {s} outside [0, 1]")
    return binomial(K, k) * s**k * (1.0 - s) ** (K - k)


class BezierCurve:
    """Polynomial curve of degree K given by K+1 control points in R^n."""

    __slots__ = ("control_points",)

    def __init__(self, control_points):
        pts = np.array(control_points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("control points must form a (K+1, n) array with n >= 1")
        pts.setflags(write=False)
        self.control_points = pts

    @property
    def degree(self) -> int:
        return self.control_points.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.control_points.shape[1]

    def evaluate(self, s: Union[float, np.ndarray]) -> np.ndarray:
        """Point(s) on the curve; `s` may be a scalar or a 1-D array.

        Returns shape (n,) for scalar input and (len(s), n) otherwise.
        """
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        if np.any(s_arr < 0.0) or np.any(s_arr > 1.0):
            raise ValueError("parameter outside [0, 1]")
        b = np.broadcast_to(self.control_points, (s_arr.size,) + self.control_points.shape).copy()
        t = s_arr[:, None, None]
        for _ in range(self.degree):
            b = (1.0 - t) * b[:, :-1, :] + t * b[:, 1:, :]
        out = b[:, 0, :]
        return out[0] if np.isscalar(s) or np.asarray(s).ndim == 0 else out

    def derivative(self) -> "BezierCurve":
        """Degree K-1 curve with control points K*(g_{k+1} - g_k)."""
        if self.degree < 1:
            raise ValueError("constant curve has no derivative curve")
        return BezierCurve(self.degree * np.diff(self.control_points, axis=0))

    def split(self, s: float) -> Tuple["BezierCurve", "BezierCurve"]:
        """Subdivide at s in (0, 1) into two degree-K curves.

        left(u) = curve(s*u), right(u) = curve(s + (1-s)*u).
        """
        s = float(s)
        if not (0.0 < s < 1.0):
            raise ValueError("split parameter must be strictly inside (0, 1)")
        level = self.control_points
        left = [level[0]]
        right = [level[-1]]
        for _ in range(self.degree):
            level = (1.0 - s) * level[:-1] + s * level[1:]
            left.append(level[0])
            right.append(level[-1])
        return BezierCurve(np.asarray(left)), BezierCurve(np.asarray(right[::-1]))

    def __repr__(self) -> str:
        return f"BezierCurve(degree={self.degree}, dim={self.dim})"
