import numpy as np
import pytest

from mintime.geometry import Ball, HPolytope
from mintime.problem import ProblemInstance


def box2d(x_lo, x_hi, y_lo, y_hi):
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    b = np.array([x_hi, -x_lo, y_hi, -y_lo])
    return HPolytope(A, b)


def bang_bang_time(distance, v_max, a_max):
    """Continuous-time minimum duration of a rest-to-rest 1-D move.

    Saturates acceleration, and the velocity bound too once the
    triangular profile would exceed it. Lower bound for any smooth
    rest-to-rest parameterization of the same distance.
    """
    if distance <= v_max**2 / a_max:
        return 2.0 * np.sqrt(distance / a_max)
    return distance / v_max + v_max / a_max


@pytest.fixture
def corridor_problem():
    """Right-angle corridor of two boxes with a unit-ball acceleration set."""
    b1 = box2d(-0.25, 2.0, -0.25, 0.25)
    b2 = box2d(1.5, 2.0, -0.25, 2.0)
    return ProblemInstance([b1, b2], [0.0, 0.0], [1.75, 1.5],
                           Ball([0.0, 0.0], 10.0), Ball([0.0, 0.0], 1.0))


@pytest.fixture
def single_set_problem():
    big = box2d(-2.0, 2.0, -2.0, 2.0)
    return ProblemInstance([big], [0.0, 0.0], [1.0, 0.0],
                           Ball([0.0, 0.0], 10.0), Ball([0.0, 0.0], 1.0))
