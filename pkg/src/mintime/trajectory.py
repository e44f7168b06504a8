"""Piecewise Bezier trajectories in time.

A trajectory is an ordered list of (curve, duration) segments. Each
curve is parameterized over [0, 1]; the time interval assigned to
segment i is mapped onto it affinely, so velocities pick up a 1/T_i
factor and accelerations 1/T_i^2.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .bezier import BezierCurve

POSITION_CONTINUITY_TOL = 1e-7
VELOCITY_CONTINUITY_TOL = 1e-6


class Trajectory:
    """Continuously differentiable piecewise curve with per-segment durations."""

    __slots__ = ("segments", "knots")

    def __init__(self, segments: Sequence[Tuple[BezierCurve, float]], check: bool = True):
        segments = [(curve, float(T)) for curve, T in segments]
        if not segments:
            raise ValueError("trajectory needs at least one segment")
        self.segments = segments
        self.knots = np.concatenate([[0.0], np.cumsum([T for _, T in segments])])
        if check:
            self._check_invariants()

    def _check_invariants(self):
        dim = self.segments[0][0].dim
        for curve, T in self.segments:
            if T <= 0:
                raise ValueError("segment durations must be positive")
            if curve.dim != dim:
                raise ValueError("segments must share one dimension")
        for (ca, Ta), (cb, Tb) in zip(self.segments[:-1], self.segments[1:]):
            gap = np.linalg.norm(ca.control_points[-1] - cb.control_points[0])
            if gap > POSITION_CONTINUITY_TOL:
                raise ValueError(f"position discontinuity {gap:.3e} at a junction")
            va = ca.derivative().control_points[-1] / Ta
            vb = cb.derivative().control_points[0] / Tb
            jump = np.linalg.norm(va - vb)
            if jump > VELOCITY_CONTINUITY_TOL:
                raise ValueError(f"velocity discontinuity {jump:.3e} at a junction")

    @property
    def num_segments(self) -> int:
        return len(self.segments)

    @property
    def dim(self) -> int:
        return self.segments[0][0].dim

    @property
    def duration(self) -> float:
        return float(self.knots[-1])

    @property
    def durations(self) -> np.ndarray:
        return np.diff(self.knots)

    def segment_index(self, t: float) -> int:
        """Segment covering time t; knots resolve to the earlier segment."""
        if not (0.0 <= t <= self.duration):
            raise ValueError(f"time {t} outside [0, {self.duration}]")
        idx = int(np.searchsorted(self.knots, t, side="left")) - 1
        return min(max(idx, 0), self.num_segments - 1)

    def _local(self, t: float) -> Tuple[int, float, float]:
        i = self.segment_index(t)
        T = self.knots[i + 1] - self.knots[i]
        return i, (t - self.knots[i]) / T, T

    def position(self, t: float) -> np.ndarray:
        i, s, _ = self._local(t)
        return self.segments[i][0].evaluate(s)

    def velocity(self, t: float) -> np.ndarray:
        i, s, T = self._local(t)
        return self.segments[i][0].derivative().evaluate(s) / T

    def acceleration(self, t: float) -> np.ndarray:
        """Left limit at interior knots; accelerations may jump there."""
        i, s, T = self._local(t)
        return self.segments[i][0].derivative().derivative().evaluate(s) / T**2

    def __repr__(self):
        return f"Trajectory(segments={self.num_segments}, duration={self.duration:.6g})"
