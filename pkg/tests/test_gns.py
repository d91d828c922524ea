import numpy as np
import pytest

from momentmodel.errors import PositivityError
from momentmodel.generators import random_matrix_measure, random_strip_measure
from momentmodel.gns import (build_gns_hamburger, build_gns_strip, gns_from_gram, hamburger_model_map,
                             hamburger_shift_residual, multiplication_image, shift_operator_A, strip_model_map,
                             strip_shift_residual, symmetry_residual)
from momentmodel.measures import MatrixAtomicMeasure, StripAtomicMeasure
from momentmodel.moments import matrix_moments, strip_moments


def test_identity_gram_gives_orthonormal_vectors():
    sp = gns_from_gram(np.eye(3), range(3))
    assert sp.dim == 3
    np.testing.assert_allclose(sp.vectors.conj().T @ sp.vectors, np.eye(3), atol=1e-15)


def test_gns_rejects_indefinite_gram():
    with pytest.raises(PositivityError):
        gns_from_gram(np.diag([1.0, -1.0]), range(2))


def test_single_atom_collapses_to_one_dimension():
    sp = build_gns_hamburger(matrix_moments(MatrixAtomicMeasure.from_atoms([(1.0, [[1.0]])]), 4), 2)
    np.testing.assert_allclose(sp.gram, np.ones((3, 3)))
    assert sp.dim == 1
    np.testing.assert_allclose(sp.vector(0), sp.vector(1))
    np.testing.assert_allclose(sp.vector(0), sp.vector(2))


def test_two_atom_example_rank():
    M = MatrixAtomicMeasure.from_atoms([(1.0, np.diag([1.0, 0.0])), (-1.0, np.diag([0.0, 1.0]))])
    assert build_gns_hamburger(matrix_moments(M, 2), 1).dim == 2


def test_inner_products_reproduce_gram():
    M = random_matrix_measure(4, K=4, N=2)
    sp = build_gns_hamburger(matrix_moments(M, 8), 4)
    assert sp.gram_residual < 1e-10 * max(1.0, np.abs(sp.gram).max())
    assert sp.inner(3, 5) == pytest.approx(sp.gram[3, 5], abs=1e-10)


def test_shift_operator_examples():
    sp = build_gns_hamburger(matrix_moments(MatrixAtomicMeasure.from_atoms([(2.0, [[1.0]])]), 4), 2)
    A = shift_operator_A(sp, 1)
    np.testing.assert_allclose(A.matrix, [[2.0]], atol=1e-12)

    M = MatrixAtomicMeasure.from_atoms([(1.0, [[1.0]]), (-1.0, [[1.0]])])
    sp = build_gns_hamburger(matrix_moments(M, 6), 3)
    A = shift_operator_A(sp, 1)
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(A.matrix).real), [-1, 1], atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_shift_operator_is_symmetric(seed):
    M = random_matrix_measure(seed)
    sp = build_gns_hamburger(matrix_moments(M, 2 * M.n_atoms), M.n_atoms)
    A = shift_operator_A(sp, M.N)
    assert symmetry_residual(sp, A) <= 1e-10


def test_strip_gns_examples():
    st = build_gns_strip(strip_moments(StripAtomicMeasure.from_atoms([(0.0, 0.0, 1.0)]), 2, 2), (1, 1))
    assert st.space.dim == 1
    np.testing.assert_allclose(st.B0.matrix, [[1]], atol=1e-14)
    np.testing.assert_allclose(st.A0.matrix, [[0]], atol=1e-14)

    st = build_gns_strip(strip_moments(StripAtomicMeasure.from_atoms([(1.0, np.pi / 2, 1.0)]), 2, 2), (1, 1))
    assert st.space.dim == 1
    np.testing.assert_allclose(st.B0.matrix, [[1j]], atol=1e-14)
    np.testing.assert_allclose(st.A0.matrix, [[1]], atol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_strip_gns_structure(seed):
    sigma = random_strip_measure(seed)
    K = sigma.n_atoms
    st = build_gns_strip(strip_moments(sigma, 2 * K, 2 * K), (K, K))
    s = strip_moments(sigma, 2 * K, 2 * K)
    for m in range(K):
        v = st.space.vector((m, 0))
        Bv = st.B0.matrix @ v
        assert np.vdot(Bv, Bv).real == pytest.approx(s.get(2 * m, 0).real, rel=1e-9, abs=1e-10)
    assert max(st.residuals.values()) <= 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_model_map_intertwines_multiplication(seed):
    M = random_matrix_measure(seed)
    n = M.n_atoms
    sp = build_gns_hamburger(matrix_moments(M, 2 * n), n)
    mm = hamburger_model_map(sp, M, M.N)
    assert max(mm.residuals.values()) <= 1e-9
    assert hamburger_shift_residual(sp, multiplication_image(mm), M.N) <= 1e-9

    sigma = random_strip_measure(seed)
    K = sigma.n_atoms
    st = build_gns_strip(strip_moments(sigma, 2 * K, 2 * K), (K, K))
    mm = strip_model_map(st, sigma)
    assert max(mm.residuals.values()) <= 1e-9
    assert strip_shift_residual(st, multiplication_image(mm)) <= 1e-9
