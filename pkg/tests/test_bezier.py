import numpy as np
import pytest

from mintime.bezier import BezierCurve, bernstein
from mintime.geometry import Ball


def test_bernstein_values():
    assert bernstein(3, 0, 0.0) == 1.0
    assert bernstein(4, 2, 0.5) == pytest.approx(0.375)
    assert bernstein(2, 1, 0.5) == pytest.approx(0.5)


def test_bernstein_domain_errors():
    with pytest.raises(ValueError):
        bernstein(3, 4, 0.5)
    with pytest.raises(ValueError):
        bernstein(3, -1, 0.5)
    with pytest.raises(ValueError):
        bernstein(3, 1, 1.5)


def test_partition_of_unity():
    rng = np.random.default_rng(0)
    for _ in range(100):
        K = int(rng.integers(1, 31))
        s = float(rng.random())
        total = sum(bernstein(K, k, s) for k in range(K + 1))
        assert abs(total - 1.0) <= 1e-12


def test_evaluate_endpoints():
    rng = np.random.default_rng(1)
    for _ in range(10):
        K = int(rng.integers(1, 9))
        curve = BezierCurve(rng.standard_normal((K + 1, 3)))
        assert np.allclose(curve.evaluate(0.0), curve.control_points[0], atol=1e-14)
        assert np.allclose(curve.evaluate(1.0), curve.control_points[-1], atol=1e-14)


def test_evaluate_values():
    curve = BezierCurve([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    assert np.allclose(curve.evaluate(0.5), [1.0, 0.0])
    scalar = BezierCurve([0.0, 2.0, 4.0])
    assert scalar.evaluate(0.25) == pytest.approx(1.0)


def test_evaluate_domain_error():
    curve = BezierCurve([[0.0], [1.0]])
    with pytest.raises(ValueError):
        curve.evaluate(-0.1)
    with pytest.raises(ValueError):
        curve.evaluate(1.1)


def test_derivative_control_points():
    line = BezierCurve([[0.0, 0.0], [1.0, 0.0]])
    assert np.allclose(line.derivative().control_points, [[1.0, 0.0]])
    parabola = BezierCurve([0.0, 1.0, 0.0])
    assert np.allclose(parabola.derivative().control_points.ravel(), [2.0, -2.0])


def test_derivative_shift_invariance():
    rng = np.random.default_rng(2)
    pts = rng.standard_normal((5, 2))
    shift = rng.standard_normal(2)
    d1 = BezierCurve(pts).derivative().control_points
    d2 = BezierCurve(pts + shift).derivative().control_points
    assert np.allclose(d1, d2)


def test_derivative_of_constant_rejected():
    with pytest.raises(ValueError):
        BezierCurve([[1.0, 2.0]]).derivative()


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(3)
    h = 1e-6
    for _ in range(20):
        K = int(rng.integers(1, 11))
        curve = BezierCurve(rng.standard_normal((K + 1, 2)))
        deriv = curve.derivative()
        for s in rng.uniform(h, 1.0 - h, size=5):
            central = (curve.evaluate(s + h) - curve.evaluate(s - h)) / (2 * h)
            assert np.linalg.norm(deriv.evaluate(s) - central) <= 1e-5


def test_split_triangle_by_hand():
    left, right = BezierCurve([0.0, 2.0, 4.0]).split(0.5)
    assert np.allclose(left.control_points.ravel(), [0.0, 1.0, 2.0])
    assert np.allclose(right.control_points.ravel(), [2.0, 3.0, 4.0])


def test_split_shared_apex():
    rng = np.random.default_rng(4)
    for _ in range(10):
        curve = BezierCurve(rng.standard_normal((6, 2)))
        s = float(rng.uniform(0.1, 0.9))
        left, right = curve.split(s)
        mid = curve.evaluate(s)
        assert np.allclose(left.evaluate(1.0), mid, atol=1e-12)
        assert np.allclose(right.evaluate(0.0), mid, atol=1e-12)


def test_split_straight_line_stays_straight():
    curve = BezierCurve([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    left, right = curve.split(0.3)
    for piece in (left, right):
        pts = piece.control_points
        chords = pts[1:] - pts[:-1]
        cross = chords[:-1, 0] * chords[1:, 1] - chords[:-1, 1] * chords[1:, 0]
        assert np.allclose(cross, 0.0, atol=1e-12)


def test_split_exactness():
    rng = np.random.default_rng(5)
    for _ in range(10):
        K = int(rng.integers(2, 9))
        curve = BezierCurve(rng.standard_normal((K + 1, 2)))
        s = float(rng.uniform(0.15, 0.85))
        left, right = curve.split(s)
        worst = 0.0
        for u in np.linspace(0.0, 1.0, 100):
            worst = max(worst, np.linalg.norm(left.evaluate(u) - curve.evaluate(s * u)))
            worst = max(worst, np.linalg.norm(
                right.evaluate(u) - curve.evaluate(s + (1 - s) * u)))
        assert worst <= 1e-10


def test_split_endpoint_rejected():
    curve = BezierCurve([0.0, 1.0, 2.0])
    for bad in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(ValueError):
            curve.split(bad)


def test_convex_hull_containment():
    rng = np.random.default_rng(6)
    curve = BezierCurve(rng.uniform(-1.0, 1.0, size=(7, 2)))
    center = curve.control_points.mean(axis=0)
    radius = max(np.linalg.norm(p - center) for p in curve.control_points)
    hull_ball = Ball(center, radius)
    assert all(hull_ball.contains(p, 0.0) for p in curve.control_points)
    for s in np.linspace(0.0, 1.0, 1000):
        assert hull_ball.contains(curve.evaluate(s), 1e-9)


def test_vectorized_evaluate_matches_scalar():
    rng = np.random.default_rng(7)
    curve = BezierCurve(rng.standard_normal((5, 3)))
    grid = np.linspace(0.0, 1.0, 17)
    batch = curve.evaluate(grid)
    for s, row in zip(grid, batch):
        assert np.allclose(row, curve.evaluate(float(s)))
