import numpy as np
import pytest

from momentmodel.errors import DegenerateAtomError, InvalidMeasureError
from momentmodel.measures import (JointMatrixMeasure, MatrixAtomicMeasure, StripAtomicMeasure, angle_distance,
                                  l2_dimension, radon_nikodym, trace_measure, wrap_angle)


def test_wrap_angle_half_open():
    assert wrap_angle(np.pi) == pytest.approx(-np.pi)
    assert wrap_angle(-np.pi) == pytest.approx(-np.pi)
    assert wrap_angle(3 * np.pi / 2) == pytest.approx(-np.pi / 2)
    assert angle_distance(np.pi - 1e-3, -np.pi + 1e-3) == pytest.approx(2e-3)


def test_matrix_measure_sorts_and_validates():
    M = MatrixAtomicMeasure.from_atoms([(1.0, np.diag([1.0, 0.0])), (-1.0, np.diag([0.0, 3.0]))])
    np.testing.assert_array_equal(M.positions, [-1.0, 1.0])
    assert M.N == 2 and M.n_atoms == 2
    with pytest.raises(InvalidMeasureError):
        MatrixAtomicMeasure.from_atoms([(0.0, np.diag([1.0, -1.0]))])
    with pytest.raises(InvalidMeasureError):
        MatrixAtomicMeasure.from_atoms([(0.0, np.array([[1.0, 1.0], [0.0, 1.0]]))])
    with pytest.raises(InvalidMeasureError):
        MatrixAtomicMeasure.from_atoms([(0.0, np.eye(2)), (0.0, np.eye(2))])
    with pytest.raises(InvalidMeasureError):
        MatrixAtomicMeasure.from_atoms([(0.0, np.zeros((2, 2)))])


def test_strip_measure_validation():
    s = StripAtomicMeasure.from_atoms([(1.0, np.pi, 1.0)])
    assert s.phi[0] == pytest.approx(-np.pi)
    with pytest.raises(InvalidMeasureError):
        StripAtomicMeasure.from_atoms([(0.0, 0.0, 0.0)])
    with pytest.raises(InvalidMeasureError):
        StripAtomicMeasure.from_atoms([(0.0, np.pi, 1.0), (0.0, -np.pi, 1.0)])


@pytest.mark.parametrize("atoms, expected", [
    ([(0.0, np.eye(2))], [(0.0, 2.0)]),
    ([(1.0, np.diag([1.0, 0.0])), (-1.0, np.diag([0.0, 3.0]))], [(-1.0, 3.0), (1.0, 1.0)]),
    ([(5.0, np.ones((2, 2)))], [(5.0, 2.0)]),
])
def test_trace_measure(atoms, expected):
    tau = trace_measure(MatrixAtomicMeasure.from_atoms(atoms))
    np.testing.assert_allclose(tau.positions, [p for p, _ in expected])
    np.testing.assert_allclose(tau.masses, [m for _, m in expected])


@pytest.mark.parametrize("t, W, expected", [
    (0.0, np.eye(2), np.eye(2) / 2),
    (1.0, np.diag([2.0, 0.0]), np.diag([1.0, 0.0])),
    (3.0, np.ones((2, 2)), np.ones((2, 2)) / 2),
])
def test_radon_nikodym(t, W, expected):
    np.testing.assert_allclose(radon_nikodym(MatrixAtomicMeasure.from_atoms([(t, W)]), 0), expected)


def test_radon_nikodym_zero_trace_atom():
    M = MatrixAtomicMeasure.from_atoms([(0.0, np.eye(2)), (1.0, np.zeros((2, 2)))])
    with pytest.raises(DegenerateAtomError):
        radon_nikodym(M, 1)


def test_l2_dimension():
    rng = np.random.default_rng(1)
    W = [(G := rng.standard_normal((3, 3))) @ G.T for _ in range(4)]
    assert l2_dimension(MatrixAtomicMeasure(np.arange(4.0), np.stack(W))) == 12
    assert l2_dimension(MatrixAtomicMeasure.from_atoms([(1.0, np.diag([1.0, 0.0])), (-1.0, np.diag([0.0, 1.0]))])) == 2
    v = np.array([[1.0], [2.0], [3.0]])
    assert l2_dimension(MatrixAtomicMeasure.from_atoms([(0.0, v @ v.T)])) == 1


def test_joint_measure_round_trips():
    s = StripAtomicMeasure.from_atoms([(1.0, 0.5, 2.0), (0.0, -1.0, 1.0)])
    assert s.as_joint().to_strip_measure() == s
    M = MatrixAtomicMeasure.from_atoms([(2.0, np.eye(2))])
    assert M.as_joint().to_matrix_measure() == M
    J = JointMatrixMeasure(np.zeros((1, 1)), np.zeros((1, 1)), np.ones((1, 1, 1)))
    assert J.order == (1, 1)
    with pytest.raises(InvalidMeasureError):
        JointMatrixMeasure(np.zeros((0, 1)), np.zeros((0, 0)), np.zeros((0, 1, 1)))


def test_measures_are_immutable():
    M = MatrixAtomicMeasure.from_atoms([(0.0, np.eye(2))])
    with pytest.raises(ValueError):
        M.weights[0, 0, 0] = 5.0
