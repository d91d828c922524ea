import numpy as np
import pytest

from momentmodel.errors import DimensionError, DomainError
from momentmodel.kernel import (DEFAULT_TOL, Tolerances, commutator_norm, hermitian_check, normal_eig, numerical_rank,
                                pinv, psd_check, psd_factor, unitary_check)


def test_tolerances_reject_negative():
    with pytest.raises(ValueError):
        Tolerances(psd_eps=-1.0)
    with pytest.raises(ValueError):
        Tolerances(rank_eps=float("nan"))


@pytest.mark.parametrize("A, expected", [
    (np.eye(3), True),
    (np.array([[0, 1], [-1, 0]]), False),
    (np.array([[1, 1j], [-1j, 2]]), True),
])
def test_hermitian_check(A, expected):
    assert hermitian_check(A) is expected


def test_hermitian_check_needs_square():
    with pytest.raises(DimensionError):
        hermitian_check(np.ones((2, 3)))


@pytest.mark.parametrize("A, ok, lam", [
    (np.diag([1.0, 0.0]), True, 0.0),
    (np.diag([1.0, -1.0]), False, -1.0),
    (np.ones((2, 2)), True, 0.0),
])
def test_psd_check(A, ok, lam):
    got_ok, got_lam = psd_check(A)
    assert got_ok is ok
    assert got_lam == pytest.approx(lam, abs=1e-14)


def test_psd_check_rejects_non_hermitian():
    with pytest.raises(DomainError):
        psd_check(np.array([[0, 1], [0, 0]]))


def test_numerical_rank_examples():
    assert numerical_rank(np.zeros((2, 2))) == 0
    assert numerical_rank(np.ones((3, 3))) == 1
    assert numerical_rank(np.diag([1.0, 1e-30]), Tolerances(rank_eps=1e-12)) == 1


def test_psd_factor_examples():
    C = psd_factor(np.diag([4.0, 0.0]))
    assert C.shape == (2, 1)
    np.testing.assert_allclose(C @ C.conj().T, np.diag([4.0, 0.0]), atol=1e-14)
    assert abs(abs(C[0, 0]) - 2.0) < 1e-14

    C = psd_factor(np.eye(4))
    np.testing.assert_allclose(C.conj().T @ C, np.eye(4), atol=1e-14)

    C = psd_factor(np.ones((2, 2)))
    assert C.shape == (2, 1)
    np.testing.assert_allclose(C @ C.conj().T, np.ones((2, 2)), atol=1e-14)


def test_psd_factor_rejects_indefinite():
    with pytest.raises(DomainError):
        psd_factor(np.diag([1.0, -1.0]))


def test_unitary_and_commutator():
    U = np.array([[0, 1j], [1j, 0]])
    assert unitary_check(U)
    assert not unitary_check(2 * U)
    assert commutator_norm(np.diag([1, 2]), np.diag([3, 4])) == 0.0
    assert commutator_norm(np.array([[0, 1], [1, 0]]), np.diag([1, -1])) > 1.0


def test_normal_eig_reconstructs_unitary():
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    U = Q @ np.diag(np.exp(1j * rng.uniform(-np.pi, np.pi, 5))) @ Q.conj().T
    w, V = normal_eig(U)
    np.testing.assert_allclose(V @ np.diag(w) @ V.conj().T, U, atol=1e-12)
    np.testing.assert_allclose(np.abs(w), 1.0, atol=1e-12)


def test_pinv_matches_numpy_on_full_rank():
    A = np.array([[2.0, 1.0], [0.0, 1.0], [1.0, 1.0]])
    np.testing.assert_allclose(pinv(A, DEFAULT_TOL), np.linalg.pinv(A), atol=1e-14)
