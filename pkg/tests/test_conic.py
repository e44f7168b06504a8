import numpy as np
import pytest

from mintime import conic
from mintime.conic import AffineVector, BackendConfig, ConicProgram

av = AffineVector.variables


def test_add_variables_ranges():
    p = ConicProgram()
    assert list(p.add_variables(3)) == [0, 1, 2]
    q = ConicProgram()
    assert list(q.add_variables(2)) == [0, 1]
    assert list(q.add_variables(3)) == [2, 3, 4]
    assert q.num_vars == 5


def test_add_variables_zero_count():
    p = ConicProgram()
    idx = p.add_variables(0)
    assert idx.size == 0 and p.num_vars == 0


def test_zero_cone_equality():
    p = ConicProgram()
    x = p.add_variables(1)
    p.add_objective_term(x, 1.0)
    p.add_cone_block(av(x) - 5.0, conic.ZERO)
    sol = conic.solve(p)
    assert sol.status == conic.OPTIMAL
    assert np.isclose(sol.primal[0], 5.0)


def test_soc_norm_epigraph():
    p = ConicProgram()
    t = p.add_variables(1)
    p.add_objective_term(t, 1.0)
    p.add_cone_block([av(t), AffineVector.constant([3.0, 4.0])], conic.SOC)
    sol = conic.solve(p)
    assert sol.status == conic.OPTIMAL
    assert abs(sol.primal[0] - 5.0) < 1e-6


def test_rotated_cone_reciprocal_epigraph():
    p = ConicProgram()
    u = p.add_variables(1)
    s = p.add_variables(1)
    p.add_objective_term(u, 1.0)
    p.add_cone_block(av(s) - 2.0, conic.ZERO)
    p.add_cone_block([av(u), av(s), AffineVector.constant([np.sqrt(2.0)])], conic.RSOC)
    sol = conic.solve(p)
    assert sol.status == conic.OPTIMAL
    assert abs(sol.primal[u[0]] - 0.5) < 1e-6


def test_lp_statuses():
    p = ConicProgram()
    x = p.add_variables(1)
    p.add_objective_term(x, 1.0)
    p.add_cone_block(av(x) - 1.0, conic.NONNEG)
    assert conic.solve(p).status == conic.OPTIMAL

    q = ConicProgram()
    x = q.add_variables(1)
    q.add_objective_term(x, 1.0)
    q.add_cone_block(av(x) - 1.0, conic.NONNEG)
    q.add_cone_block(-av(x), conic.NONNEG)
    assert conic.solve(q).status == conic.INFEASIBLE

    r = ConicProgram()
    x = r.add_variables(1)
    r.add_objective_term(x, 1.0)
    assert conic.solve(r).status == conic.UNBOUNDED


def _sample_program():
    p = ConicProgram()
    x = p.add_variables(3)
    t = p.add_variables(1)
    p.add_objective_term(t, 1.0)
    p.add_objective_term(x[:1], 0.25)
    p.add_cone_block(av(x) - np.array([1.0, -2.0, 0.5]), conic.NONNEG)
    p.add_cone_block([av(t), av(x)], conic.SOC)
    p.add_cone_block(av(x[1:2]) + 2.0, conic.ZERO)
    return p


def test_build_determinism_bit_identical():
    a, b = _sample_program(), _sample_program()
    ca, ra, cca, va, ba, cones_a = a.assemble()
    cb, rb, ccb, vb, bb, cones_b = b.assemble()
    assert np.array_equal(ca, cb)
    assert np.array_equal(ra, rb) and np.array_equal(cca, ccb)
    assert np.array_equal(va, vb) and np.array_equal(ba, bb)
    assert cones_a == cones_b


def test_residuals_within_backend_tolerance():
    cfg = BackendConfig()
    for program in (_sample_program(),):
        sol = conic.solve(program, cfg)
        assert sol.status == conic.OPTIMAL
        assert conic.max_violation(program, sol.primal) <= 10 * cfg.feasibility_tol


def test_cone_violation_values():
    assert conic.cone_violation(np.zeros(3), conic.ZERO) == 0.0
    assert conic.cone_violation(np.array([1.0, -0.5]), conic.NONNEG) == 0.5
    assert conic.cone_violation(np.array([5.0, 3.0, 4.0]), conic.SOC) == pytest.approx(0.0)
    assert conic.cone_violation(np.array([1.0, 1.0, np.sqrt(2.0)]), conic.RSOC) == pytest.approx(0.0)
    assert conic.cone_violation(np.array([0.0, 0.0, 1.0]), conic.RSOC) > 0


def test_malformed_blocks_rejected():
    p = ConicProgram()
    x = p.add_variables(2)
    with pytest.raises(ValueError):
        p.add_cone_block(av(x[:1]), conic.SOC)
    with pytest.raises(ValueError):
        p.add_cone_block(av(x), conic.RSOC)
    with pytest.raises(ValueError):
        p.add_cone_block(av(x), "exotic")
    with pytest.raises(ValueError):
        p.add_cone_block(av(np.array([5])), conic.NONNEG)


def test_unknown_objective_variable_rejected():
    p = ConicProgram()
    p.add_variables(1)
    with pytest.raises(ValueError):
        p.add_objective_term(np.array([3]), 1.0)


def test_dump_format(tmp_path):
    p = _sample_program()
    path = tmp_path / "program.txt"
    conic.dump_program(p, path)
    lines = path.read_text().splitlines()
    num_vars, num_blocks = map(int, lines[0].split())
    assert num_vars == 4 and num_blocks == p.num_blocks
    tag, nrows, nnz = lines[1].split()
    assert tag == conic.NONNEG and int(nrows) == 3 and int(nnz) == 3


def test_backend_config_validation():
    with pytest.raises(ValueError):
        BackendConfig(feasibility_tol=0.0)
    with pytest.raises(ValueError):
        BackendConfig(gap_tol=-1e-9)
