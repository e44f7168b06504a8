"""Minimal conic-program builder with an interior-point backend.

Programs have a linear objective and constraint blocks living in four
cones: equalities (zero cone), the nonnegative orthant, second-order
cones, and rotated second-order cones. Constraint rows are affine
expressions of the decision variables, stored as sparse triplets per
block. Solving lowers everything to Clarabel's standard form
``min c'x  s.t.  Ax + s = b, s in K``, rewriting rotated cones as plain
second-order cones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

import clarabel

ZERO = "zero"
NONNEG = "nonneg"
SOC = "soc"
RSOC = "rsoc"
CONES = (ZERO, NONNEG, SOC, RSOC)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERICAL_FAILURE = "numerical-failure"

_SQRT2 = np.sqrt(2.0)


class SolverFailure(RuntimeError):
    """Raised by callers that cannot proceed without an optimal solution."""


class AffineVector:
    """Affine expression of program variables, a stack of rows.

    Each term is a pair ``(cols, data)`` where ``data`` is either a 1-D
    array (diagonal coefficients, one variable per row) or a dense
    ``(nrows, len(cols))`` matrix. The expression value is the sum of
    all terms plus ``const``.
    """

    __slots__ = ("terms", "const")

    def __init__(self, terms, const):
        self.terms = terms
        self.const = const

    @property
    def nrows(self) -> int:
        return self.const.shape[0]

    @classmethod
    def variables(cls, cols) -> "AffineVector":
        """One row per variable index, identity coefficients."""
        cols = np.asarray(cols, dtype=np.int64).ravel()
        return cls([(cols, np.ones(len(cols)))], np.zeros(len(cols)))

    @classmethod
    def constant(cls, values) -> "AffineVector":
        values = np.atleast_1d(np.asarray(values, dtype=float)).ravel()
        return cls([], values.copy())

    def __neg__(self):
        return AffineVector([(c, -d) for c, d in self.terms], -self.const)

    def __add__(self, other):
        if isinstance(other, AffineVector):
            if other.nrows != self.nrows:
                raise ValueError("row count mismatch in affine sum")
            return AffineVector(self.terms + other.terms, self.const + other.const)
        return AffineVector(list(self.terms), self.const + np.asarray(other, dtype=float))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, AffineVector) else -np.asarray(other, dtype=float))

    def __rsub__(self, other):
        return (-self) + np.asarray(other, dtype=float)

    def __mul__(self, scalar):
        scalar = float(scalar)
        return AffineVector([(c, d * scalar) for c, d in self.terms], self.const * scalar)

    __rmul__ = __mul__

    def transform(self, mat) -> "AffineVector":
        """Rows become ``mat @ rows``."""
        mat = np.asarray(mat, dtype=float)
        terms = []
        for cols, data in self.terms:
            if data.ndim == 1:
                terms.append((cols, mat * data[None, :]))
            else:
                terms.append((cols, mat @ data))
        return AffineVector(terms, mat @ self.const)

    def outer(self, vec) -> "AffineVector":
        """For a scalar expression, the rows ``vec * expr``."""
        if self.nrows != 1:
            raise ValueError("outer requires a scalar expression")
        vec = np.atleast_1d(np.asarray(vec, dtype=float))
        terms = []
        for cols, data in self.terms:
            row = data if data.ndim == 2 else data[None, :]
            terms.append((cols, vec[:, None] @ row))
        return AffineVector(terms, vec * self.const[0])


@dataclass
class BackendConfig:
    """Interior-point termination settings."""

    feasibility_tol: float = 1e-8
    gap_tol: float = 1e-8
    max_iterations: int = 200
    verbose: bool = False

    def __post_init__(self):
        if self.feasibility_tol <= 0 or self.gap_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class Solution:
    """Outcome of a conic solve."""

    status: str
    primal: np.ndarray
    objective_value: float


class _Block:
    __slots__ = ("cone", "nrows", "rows", "cols", "vals", "const")

    def __init__(self, cone, nrows, rows, cols, vals, const):
        self.cone = cone
        self.nrows = nrows
        self.rows = rows
        self.cols = cols
        self.vals = vals
        self.const = const


class ConicProgram:
    """Linear-objective program over zero/nonneg/SOC/rotated-SOC blocks."""

    def __init__(self):
        self.num_vars = 0
        self._obj_cols: List[np.ndarray] = []
        self._obj_vals: List[np.ndarray] = []
        self.blocks: List[_Block] = []
        self._assembled = None

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def add_variables(self, count: int) -> np.ndarray:
        """Append `count` variables, returning their contiguous indices."""
        if count < 0:
            raise ValueError("variable count must be nonnegative")
        idx = np.arange(self.num_vars, self.num_vars + count, dtype=np.int64)
        self.num_vars += count
        self._assembled = None
        return idx

    def add_objective_term(self, cols, coeffs) -> None:
        cols = np.asarray(cols, dtype=np.int64).ravel()
        coeffs = np.broadcast_to(np.asarray(coeffs, dtype=float), cols.shape).ravel()
        if cols.size and (cols.min() < 0 or cols.max() >= self.num_vars):
            raise ValueError("objective references unknown variable")
        self._obj_cols.append(cols)
        self._obj_vals.append(coeffs.copy())
        self._assembled = None

    def add_cone_block(self, rows: Union[AffineVector, Sequence[AffineVector]], cone: str) -> int:
        """Append a constraint block; `rows` may be a list to stack."""
        if cone not in CONES:
            raise ValueError(f"unknown cone tag {cone!r}")
        parts = [rows] if isinstance(rows, AffineVector) else list(rows)
        nrows = sum(p.nrows for p in parts)
        if cone == SOC and nrows < 2:
            raise ValueError("second-order block needs at least 2 rows")
        if cone == RSOC and nrows < 3:
            raise ValueError("rotated second-order block needs at least 3 rows")
        if nrows < 1:
            raise ValueError("empty constraint block")

        r_parts, c_parts, v_parts, consts = [], [], [], []
        offset = 0
        for part in parts:
            for cols, data in part.terms:
                if cols.size and (cols.min() < 0 or cols.max() >= self.num_vars):
                    raise ValueError("constraint references unknown variable")
                if data.ndim == 1:
                    r_parts.append(offset + np.arange(part.nrows, dtype=np.int64))
                    c_parts.append(cols)
                    v_parts.append(data)
                else:
                    p, q = data.shape
                    r_parts.append(offset + np.repeat(np.arange(p, dtype=np.int64), q))
                    c_parts.append(np.tile(cols, p))
                    v_parts.append(data.ravel())
            consts.append(part.const)
            offset += part.nrows

        block = _Block(
            cone,
            nrows,
            np.concatenate(r_parts) if r_parts else np.zeros(0, dtype=np.int64),
            np.concatenate(c_parts) if c_parts else np.zeros(0, dtype=np.int64),
            np.concatenate(v_parts) if v_parts else np.zeros(0),
            np.concatenate(consts),
        )
        self.blocks.append(block)
        self._assembled = None
        return len(self.blocks) - 1

    def objective_vector(self) -> np.ndarray:
        c = np.zeros(self.num_vars)
        for cols, vals in zip(self._obj_cols, self._obj_vals):
            np.add.at(c, cols, vals)
        return c

    def assemble(self):
        """Stacked triplet data ``(c, rows, cols, vals, const, cone_sizes)``.

        Rotated second-order blocks are kept as-is here; the backend
        rewrites them. Cached until the program is mutated again.
        """
        if self._assembled is None:
            offsets = np.cumsum([0] + [b.nrows for b in self.blocks])
            rows = np.concatenate([b.rows + off for b, off in zip(self.blocks, offsets)] or [np.zeros(0, np.int64)])
            cols = np.concatenate([b.cols for b in self.blocks] or [np.zeros(0, np.int64)])
            vals = np.concatenate([b.vals for b in self.blocks] or [np.zeros(0)])
            const = np.concatenate([b.const for b in self.blocks] or [np.zeros(0)])
            cones = [(b.cone, b.nrows) for b in self.blocks]
            self._assembled = (self.objective_vector(), rows, cols, vals, const, cones)
        return self._assembled

    def block_values(self, block_id: int, x: np.ndarray) -> np.ndarray:
        """Evaluate the affine rows of one block at the point `x`."""
        b = self.blocks[block_id]
        out = b.const.copy()
        np.add.at(out, b.rows, b.vals * x[b.cols])
        return out


def cone_violation(values: np.ndarray, cone: str) -> float:
    """How far `values` sits outside its cone (<= 0 means inside)."""
    v = np.asarray(values, dtype=float)
    if cone == ZERO:
        return float(np.max(np.abs(v))) if v.size else 0.0
    if cone == NONNEG:
        return float(-np.min(v)) if v.size else 0.0
    if cone == SOC:
        return float(np.linalg.norm(v[1:]) - v[0])
    if cone == RSOC:
        return float(max(np.dot(v[2:], v[2:]) - 2.0 * v[0] * v[1], -v[0], -v[1]))
    raise ValueError(f"unknown cone tag {cone!r}")


def max_violation(program: ConicProgram, x: np.ndarray) -> float:
    """Worst cone violation over all blocks at the point `x`."""
    worst = 0.0
    for i, b in enumerate(program.blocks):
        worst = max(worst, cone_violation(program.block_values(i, x), b.cone))
    return worst


def _lower_rsoc(rows, cols, vals, const):
    """Map rotated-cone rows (t, s, u...) to SOC rows (t+s, t-s, sqrt2*u)."""
    new_r, new_c, new_v = [], [], []
    for r, c, v in zip(rows, cols, vals):
        if r == 0:
            new_r += [0, 1]
            new_c += [c, c]
            new_v += [v, v]
        elif r == 1:
            new_r += [0, 1]
            new_c += [c, c]
            new_v += [v, -v]
        else:
            new_r.append(r)
            new_c.append(c)
            new_v.append(v * _SQRT2)
    out_const = const.copy()
    out_const[0] = const[0] + const[1]
    out_const[1] = const[0] - const[1]
    out_const[2:] = const[2:] * _SQRT2
    return (
        np.asarray(new_r, dtype=np.int64),
        np.asarray(new_c, dtype=np.int64),
        np.asarray(new_v, dtype=float),
        out_const,
    )


def _clarabel_cones(cones):
    """Merge adjacent zero/nonneg runs and translate cone tags."""
    out = []
    for tag, size in cones:
        if tag == ZERO:
            if out and isinstance(out[-1], clarabel.ZeroConeT):
                out[-1] = clarabel.ZeroConeT(out[-1].dim + size)
            else:
                out.append(clarabel.ZeroConeT(size))
        elif tag == NONNEG:
            if out and isinstance(out[-1], clarabel.NonnegativeConeT):
                out[-1] = clarabel.NonnegativeConeT(out[-1].dim + size)
            else:
                out.append(clarabel.NonnegativeConeT(size))
        else:
            out.append(clarabel.SecondOrderConeT(size))
    return out


def solve(program: ConicProgram, config: Optional[BackendConfig] = None) -> Solution:
    """Solve the program with Clarabel; never raises on backend breakdown."""
    config = config or BackendConfig()
    n = program.num_vars
    if n == 0:
        return Solution(OPTIMAL, np.zeros(0), 0.0)

    c, rows, cols, vals, const, cones = program.assemble()

    # Rewrite rotated blocks block-by-block before stacking the matrix.
    if any(tag == RSOC for tag, _ in cones):
        r_parts, c_parts, v_parts, b_parts, tags = [], [], [], [], []
        offset = 0
        for block in program.blocks:
            if block.cone == RSOC:
                br, bc, bv, bconst = _lower_rsoc(block.rows, block.cols, block.vals, block.const)
                tags.append((SOC, block.nrows))
            else:
                br, bc, bv, bconst = block.rows, block.cols, block.vals, block.const
                tags.append((block.cone, block.nrows))
            r_parts.append(br + offset)
            c_parts.append(bc)
            v_parts.append(bv)
            b_parts.append(bconst)
            offset += block.nrows
        rows = np.concatenate(r_parts)
        cols = np.concatenate(c_parts)
        vals = np.concatenate(v_parts)
        const = np.concatenate(b_parts)
        cones = tags

    m = const.shape[0]
    A = sparse.coo_matrix((-vals, (rows, cols)), shape=(m, n)).tocsc()
    P = sparse.csc_matrix((n, n))

    settings = clarabel.DefaultSettings()
    settings.verbose = config.verbose
    settings.max_iter = config.max_iterations
    settings.tol_feas = config.feasibility_tol
    settings.tol_gap_abs = config.gap_tol
    settings.tol_gap_rel = config.gap_tol

    try:
        solver = clarabel.DefaultSolver(P, c, A, const, _clarabel_cones(cones), settings)
        result = solver.solve()
    except BaseException:
        return Solution(NUMERICAL_FAILURE, np.full(n, np.nan), np.nan)

    status = result.status
    if status == clarabel.SolverStatus.Solved:
        x = np.asarray(result.x, dtype=float)
        return Solution(OPTIMAL, x, float(c @ x))
    if status == clarabel.SolverStatus.AlmostSolved:
        # The backend stalled shy of its targets; accept only after
        # verifying the returned point really is near-optimal.
        gap = abs(result.obj_val - result.obj_val_dual)
        scale = max(1.0, abs(result.obj_val))
        if (result.r_prim <= 10.0 * config.feasibility_tol
                and result.r_dual <= 10.0 * config.feasibility_tol
                and gap <= 100.0 * config.gap_tol * scale):
            x = np.asarray(result.x, dtype=float)
            return Solution(OPTIMAL, x, float(c @ x))
        return Solution(NUMERICAL_FAILURE, np.full(n, np.nan), np.nan)
    if status == clarabel.SolverStatus.PrimalInfeasible:
        return Solution(INFEASIBLE, np.full(n, np.nan), np.nan)
    if status == clarabel.SolverStatus.DualInfeasible:
        return Solution(UNBOUNDED, np.full(n, np.nan), np.nan)
    return Solution(NUMERICAL_FAILURE, np.full(n, np.nan), np.nan)


def dump_program(program: ConicProgram, path) -> None:
    """Write the program in a plain sparse-triplet text format.

    Line 1: ``num_vars num_blocks``. Then for each block: a line
    ``cone nrows nnz``, one ``row col value`` line per triplet (row
    indices local to the block), and one offset value per row.
    """
    lines = [f"{program.num_vars} {program.num_blocks}"]
    for b in program.blocks:
        lines.append(f"{b.cone} {b.nrows} {len(b.vals)}")
        for r, c, v in zip(b.rows, b.cols, b.vals):
            lines.append(f"{r} {c} {float(v)!r}")
        for v in b.const:
            lines.append(f"{float(v)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
