"""Problem and solver-configuration records."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .conic import BackendConfig
from .geometry import ConvexSet


@dataclass(frozen=True)
class ProblemInstance:
    """A corridor of safe sets with endpoints and derivative bounds.

    The trajectory must traverse safe_sets in order, start at rest at
    q_init in the first set, stop at q_term in the last, and keep its
    velocity in velocity_set and acceleration in acceleration_set at
    all times. Geometric consistency (endpoint membership, consecutive
    overlaps, origin containment) is established by solver.validate,
    which runs the needed feasibility solves; only shapes are checked
    here.
    """

    safe_sets: Tuple[ConvexSet, ...]
    q_init: np.ndarray
    q_term: np.ndarray
    velocity_set: ConvexSet
    acceleration_set: ConvexSet

    def __post_init__(self):
        object.__setattr__(self, "safe_sets", tuple(self.safe_sets))
        if not self.safe_sets:
            raise ValueError("need at least one safe set")
        q_init = np.asarray(self.q_init, dtype=float).ravel()
        q_term = np.asarray(self.q_term, dtype=float).ravel()
        q_init.setflags(write=False)
        q_term.setflags(write=False)
        object.__setattr__(self, "q_init", q_init)
        object.__setattr__(self, "q_term", q_term)
        n = self.safe_sets[0].dim
        dims = {s.dim for s in self.safe_sets} | {
            q_init.shape[0], q_term.shape[0], self.velocity_set.dim, self.acceleration_set.dim}
        if dims != {n}:
            raise ValueError("all sets and endpoints must share one dimension")

    @property
    def num_sets(self) -> int:
        return len(self.safe_sets)

    @property
    def dim(self) -> int:
        return self.safe_sets[0].dim


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs.

    degree is the Bezier degree of every segment (at least 3, enough
    for straight lines with zero endpoint velocities). tolerance is the
    relative objective-decrease threshold compared between consecutive
    subproblems of the same kind. min_traversal_time > 0 adds a lower
    bound on every segment duration, for problems where a transition
    region collapses to a touching point. zero_transition_acceleration
    pins the acceleration to zero at every junction, removing
    acceleration jumps at the cost of a longer trajectory.
    """

    degree: int = 5
    tolerance: float = 0.01
    max_subproblems: int = 100
    zero_transition_acceleration: bool = False
    min_traversal_time: float = 0.0
    assumption1_check: bool = False
    backend: BackendConfig = field(default_factory=BackendConfig)

    def __post_init__(self):
        if self.degree < 3:
            raise ValueError("curve degree must be at least 3")
        if not (0.0 < self.tolerance <= 1.0):
            raise ValueError("tolerance must lie in (0, 1]")
        if self.max_subproblems < 1:
            raise ValueError("need at least one subproblem")
        if self.min_traversal_time < 0:
            raise ValueError("minimum traversal time cannot be negative")
