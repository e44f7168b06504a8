"""Convex sets (H-polytopes and balls) and the set-level queries the
trajectory pipeline needs: membership, scaled membership x in lam*S as
cone rows, pairwise intersection tests, directional extents, and
tangent-polytope approximations of ellipsoids.

Sets are immutable and validated at construction, so downstream code
never re-checks them.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import conic
from .conic import AffineVector, BackendConfig, ConicProgram

DEFAULT_TOL = 1e-7


class ConvexSet:
    """Base class; concrete sets are HPolytope and Ball."""

    dim: int

    def contains(self, x, tol: float = DEFAULT_TOL) -> bool:
        return self.membership_residual(x) <= tol

    def membership_residual(self, x) -> float:
        raise NotImplementedError

    def scaled_membership(self, x: AffineVector, lam: AffineVector):
        raise NotImplementedError

    def contains_origin_strictly(self) -> bool:
        raise NotImplementedError

    def directional_extent(self, d) -> Tuple[float, float]:
        raise NotImplementedError

    def _check_dim(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != self.dim:
            raise ValueError(f"point has dimension {x.shape[0]}, set has {self.dim}")
        return x


class HPolytope(ConvexSet):
    """Polytope {x : A x <= b}.

    Nonemptiness is verified at construction: either a known feasible
    point is supplied, or a small slack-minimization conic solve runs.
    """

    __slots__ = ("A", "b", "dim")

    def __init__(self, A, b, feasible_point=None, backend: Optional[BackendConfig] = None):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if A.shape[0] != b.shape[0]:
            raise ValueError("facet matrix and offset vector disagree on row count")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("polytope data must be finite")
        A.setflags(write=False)
        b.setflags(write=False)
        self.A = A
        self.b = b
        self.dim = A.shape[1]
        if feasible_point is not None:
            if self.membership_residual(feasible_point) > DEFAULT_TOL:
                raise ValueError("claimed feasible point is not inside the polytope")
        elif _min_slack([self], backend) > DEFAULT_TOL:
            raise ValueError("polytope {x : Ax <= b} is empty")

    def membership_residual(self, x) -> float:
        x = self._check_dim(x)
        return float(np.max(self.A @ x - self.b))

    def scaled_membership(self, x: AffineVector, lam: AffineVector):
        """Rows lam*b - A x >= 0, exact encoding of x in lam*S for lam > 0."""
        return [(conic.NONNEG, lam.outer(self.b) - x.transform(self.A))]

    def contains_origin_strictly(self) -> bool:
        return bool(np.all(self.b > 0))

    def directional_extent(self, d) -> Tuple[float, float]:
        d = _check_unit(self, d)
        if self.membership_residual(np.zeros(self.dim)) > 1e-9:
            raise ValueError("directional extent requires a set containing the origin")
        Ad = self.A @ d

        def reach(ad):
            pos = ad > 1e-14
            if not np.any(pos):
                return float("inf")
            return float(np.min(self.b[pos] / ad[pos]))

        return reach(Ad), reach(-Ad)

    def __repr__(self):
        return f"HPolytope(facets={self.A.shape[0]}, dim={self.dim})"


class Ball(ConvexSet):
    """Euclidean ball {x : ||x - c|| <= rho} with rho > 0."""

    __slots__ = ("center", "radius", "dim")

    def __init__(self, center, radius):
        center = np.asarray(center, dtype=float).ravel()
        radius = float(radius)
        if not np.all(np.isfinite(center)) or not np.isfinite(radius):
            raise ValueError("ball data must be finite")
        if radius <= 0:
            raise ValueError("ball radius must be positive")
        center.setflags(write=False)
        self.center = center
        self.radius = radius
        self.dim = center.shape[0]

    def membership_residual(self, x) -> float:
        x = self._check_dim(x)
        return float(np.linalg.norm(x - self.center) - self.radius)

    def scaled_membership(self, x: AffineVector, lam: AffineVector):
        """One second-order row set ||x - lam*c|| <= lam*rho."""
        return [(conic.SOC, [lam * self.radius, x - lam.outer(self.center)])]

    def contains_origin_strictly(self) -> bool:
        return bool(np.linalg.norm(self.center) < self.radius)

    def directional_extent(self, d) -> Tuple[float, float]:
        d = _check_unit(self, d)
        proj = float(d @ self.center)
        disc = proj * proj + self.radius**2 - float(self.center @ self.center)
        if disc < 0:
            raise ValueError("directional extent requires a set containing the origin")
        root = np.sqrt(disc)
        return proj + root, -proj + root

    def __repr__(self):
        return f"Ball(radius={self.radius}, dim={self.dim})"


def _check_unit(set_, d) -> np.ndarray:
    d = set_._check_dim(d)
    if abs(np.linalg.norm(d) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    return d


def _min_slack(sets: Sequence[ConvexSet], backend: Optional[BackendConfig] = None) -> float:
    """Smallest common slack t such that every set inflated by t has a
    common point; <= 0 exactly when the intersection is nonempty."""
    dim = sets[0].dim
    program = ConicProgram()
    x = AffineVector.variables(program.add_variables(dim))
    t = AffineVector.variables(program.add_variables(1))
    program.add_objective_term(t.terms[0][0], 1.0)
    program.add_cone_block(t + 1.0, conic.NONNEG)
    for s in sets:
        if s.dim != dim:
            raise ValueError("sets must share one dimension")
        if isinstance(s, HPolytope):
            rows = AffineVector.constant(s.b) - x.transform(s.A) + t.outer(np.ones(s.b.shape[0]))
            program.add_cone_block(rows, conic.NONNEG)
        elif isinstance(s, Ball):
            program.add_cone_block([t + s.radius, x - s.center], conic.SOC)
        else:
            raise TypeError(f"unsupported set type {type(s).__name__}")
    sol = conic.solve(program, backend)
    if sol.status != conic.OPTIMAL:
        raise conic.SolverFailure(f"feasibility solve failed with status {sol.status}")
    return float(sol.objective_value)


def sets_intersect(sets: Sequence[ConvexSet], tol: float = DEFAULT_TOL,
                   backend: Optional[BackendConfig] = None) -> bool:
    """True iff the sets share a point, up to membership tolerance `tol`."""
    return _min_slack(sets, backend) <= tol


def intersection_nonempty(a: ConvexSet, b: ConvexSet, tol: float = DEFAULT_TOL,
                          backend: Optional[BackendConfig] = None) -> bool:
    return sets_intersect([a, b], tol, backend)


def _simplex_directions(n: int) -> np.ndarray:
    """n+1 unit vectors in R^n pointing at regular-simplex vertices."""
    corners = np.eye(n + 1) - np.full((n + 1, n + 1), 1.0 / (n + 1))
    # Orthonormal basis of the hyperplane orthogonal to the all-ones vector.
    basis = np.linalg.svd(corners, full_matrices=False)[2][:n]
    dirs = corners @ basis.T
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def _sphere_directions(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((count, n))
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def ellipsoid_tangent_polytope(center, semi_axes, axis_frame, m: int, seed: int = 0) -> HPolytope:
    """Outer polytopic approximation of an ellipsoid with exactly m facets.

    Each facet is tangent to the ellipsoid at one sampled boundary
    direction. In 2-D the directions are the m-th roots of unity (a
    regular circumscribed polygon). For n > 2 the +-axis directions
    come first (a tight bounding box in the ellipsoid frame when
    m = 2n), topped up with deterministic seeded sphere directions; for
    the unusual range n+1 <= m < 2n, regular-simplex directions keep
    the polytope bounded.
    """
    center = np.asarray(center, dtype=float).ravel()
    semi_axes = np.asarray(semi_axes, dtype=float).ravel()
    frame = np.atleast_2d(np.asarray(axis_frame, dtype=float))
    n = center.shape[0]
    if semi_axes.shape[0] != n or frame.shape != (n, n):
        raise ValueError("center, semi-axes, and frame dimensions disagree")
    if np.any(semi_axes <= 0):
        raise ValueError("semi-axes must be positive")
    if np.max(np.abs(frame.T @ frame - np.eye(n))) > 1e-9:
        raise ValueError("axis frame must be orthonormal")
    if m < n + 1:
        raise ValueError(f"{m} facets cannot bound a {n}-dimensional set; need m >= n+1")

    if n == 2:
        angles = 2.0 * np.pi * np.arange(m) / m
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    elif m >= 2 * n:
        axes = np.vstack([np.eye(n), -np.eye(n)])
        extra = _sphere_directions(n, m - 2 * n, seed)
        dirs = np.vstack([axes, extra]) if m > 2 * n else axes
    else:
        simplex = _simplex_directions(n)
        extra = _sphere_directions(n, m - (n + 1), seed)
        dirs = np.vstack([simplex, extra]) if m > n + 1 else simplex

    # Tangent plane at the boundary point mapped from unit direction u:
    # unnormalized normal F diag(1/axes) u, offset normal.center + 1.
    normals = dirs / semi_axes[None, :] @ frame.T
    scale = np.linalg.norm(normals, axis=1, keepdims=True)
    A = normals / scale
    b = (normals @ center + 1.0) / scale.ravel()
    return HPolytope(A, b, feasible_point=center)
