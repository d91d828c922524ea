import numpy as np
import pytest

from momentmodel.errors import InvalidSUSetError, NonCyclicError, NotCommutingError
from momentmodel.spectral import (CyclicFamily, SUSet, cyclicity_check, extract_matrix_measure,
                                  joint_spectral_decomposition, model_unitary, product_spectral_measure,
                                  random_su_set, spectral_multiplicity)


def fam(*vectors):
    return CyclicFamily(np.array(vectors, dtype=complex).T)


def test_su_set_validation():
    with pytest.raises(InvalidSUSetError):
        SUSet((np.array([[0, 1], [0, 0]]),), ())
    with pytest.raises(InvalidSUSetError):
        SUSet((), (2 * np.eye(2),))
    with pytest.raises(NotCommutingError):
        SUSet((np.array([[0, 1], [1, 0]]), np.diag([1.0, -1.0])), ())
    with pytest.raises(InvalidSUSetError):
        SUSet((), ())


def test_decomposition_diagonal():
    E = joint_spectral_decomposition(SUSet((np.diag([1.0, 2.0]),), ()))
    assert sorted(E.x[:, 0]) == pytest.approx([1, 2])
    for P, x in zip(E.projections, E.x[:, 0]):
        expected = np.diag([1.0, 0.0]) if abs(x - 1) < 1e-12 else np.diag([0.0, 1.0])
        np.testing.assert_allclose(P, expected, atol=1e-14)


def test_decomposition_offdiagonal():
    A = SUSet((np.array([[0.0, 1.0], [1.0, 0.0]]),), ())
    E = joint_spectral_decomposition(A)
    for P, x in zip(E.projections, E.x[:, 0]):
        sign = -1 if x > 0 else 1
        np.testing.assert_allclose(P, 0.5 * np.array([[1, -sign], [-sign, 1]]), atol=1e-14)
    assert max(E.residuals(A).values()) < 1e-13


def test_decomposition_mixed_order():
    A = SUSet((np.eye(2),), (np.diag([1j, -1j]),))
    E = joint_spectral_decomposition(A)
    pts = sorted((round(x, 12), round(p, 12)) for x, p in zip(E.x[:, 0], E.phi[:, 0]))
    assert pts == [(1.0, round(-np.pi / 2, 12)), (1.0, round(np.pi / 2, 12))]


def test_angle_wraparound_merges():
    # eigenphases just either side of +-pi are the same point on the circle
    U = np.diag(np.exp(1j * np.array([np.pi - 1e-12, -np.pi + 1e-12])))
    assert spectral_multiplicity(SUSet((), (U,))) == 2


@pytest.mark.parametrize("S, U, d", [
    ((np.diag([1.0, 1.0, 2.0]),), (), 2),
    ((np.eye(4),), (), 4),
    ((np.diag([1.0, 2.0]),), (np.diag(np.exp([1j, 1j])),), 1),
])
def test_spectral_multiplicity(S, U, d):
    assert spectral_multiplicity(SUSet(S, U)) == d


def test_cyclicity_examples():
    A = SUSet((np.diag([1.0, 2.0]),), ())
    assert cyclicity_check(A, fam([1, 1]))
    assert not cyclicity_check(A, fam([1, 0]))
    rng = np.random.default_rng(0)
    assert not cyclicity_check(SUSet((np.eye(2),), ()), fam(rng.standard_normal(2)))
    assert cyclicity_check(SUSet((np.eye(2),), ()), fam([1, 0], [0, 1]))


def test_extract_examples():
    A = SUSet((np.diag([1.0, 2.0]),), ())
    M = extract_matrix_measure(joint_spectral_decomposition(A), fam([1, 1])).to_matrix_measure()
    np.testing.assert_allclose(M.positions, [1, 2])
    np.testing.assert_allclose(M.weights[:, 0, 0], [1, 1])

    A = SUSet((np.eye(2),), ())
    M = extract_matrix_measure(joint_spectral_decomposition(A), fam([1, 0], [0, 1])).to_matrix_measure()
    assert M.n_atoms == 1
    np.testing.assert_allclose(M.weights[0], np.eye(2), atol=1e-14)

    A = SUSet((np.eye(2),), (np.diag([1j, -1j]),))
    sigma = extract_matrix_measure(joint_spectral_decomposition(A), fam([1, 1])).to_strip_measure()
    np.testing.assert_allclose(sigma.x, [1, 1])
    np.testing.assert_allclose(sorted(sigma.phi), [-np.pi / 2, np.pi / 2])
    np.testing.assert_allclose(sigma.w, [1, 1])


def test_extract_rejects_non_cyclic():
    A = SUSet((np.diag([1.0, 2.0]),), ())
    with pytest.raises(NonCyclicError):
        extract_matrix_measure(joint_spectral_decomposition(A), fam([1, 0]))


def test_model_unitary_examples():
    A = SUSet((np.diag([1.0, 2.0]),), ())
    mu = model_unitary(A, fam([1, 1]))
    assert mu.max_residual() <= 1e-12
    for j, x in enumerate(mu.measure.x[:, 0]):
        target = np.array([1.0, 0.0]) if abs(x - 1) < 1e-12 else np.array([0.0, 1.0])
        np.testing.assert_allclose(mu.V @ mu.model.indicator(j, 0), target, atol=1e-12)

    mu = model_unitary(SUSet((np.eye(2),), ()), fam([1, 0], [0, 1]))
    np.testing.assert_allclose(mu.V, np.eye(2), atol=1e-14)


def test_model_unitary_rejects_short_family():
    A, _ = random_su_set(6, (1, 1), seed=3, multiplicity=2)
    with pytest.raises(NonCyclicError):
        model_unitary(A, CyclicFamily(np.ones((6, 1), dtype=complex)))


@pytest.mark.parametrize("seed", range(20))
def test_model_unitary_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 13))
    order = (int(rng.integers(0, 3)), int(rng.integers(0, 3)))
    if sum(order) == 0:
        order = (1, 0)
    A, F = random_su_set(n, order, seed)
    assert model_unitary(A, F).max_residual() <= 1e-9


def test_random_su_set_contract():
    A, F = random_su_set(4, (1, 0), seed=1, multiplicity=1)
    assert spectral_multiplicity(A) == 1 and F.N == 1 and cyclicity_check(A, F)
    A, F = random_su_set(4, (1, 0), seed=1, multiplicity=2)
    assert spectral_multiplicity(A) == 2 and F.N == 2 and cyclicity_check(A, F)
    A1, F1 = random_su_set(7, (2, 1), seed=9)
    A2, F2 = random_su_set(7, (2, 1), seed=9)
    assert all(np.array_equal(a, b) for a, b in zip(A1.operators, A2.operators))
    assert np.array_equal(F1.vectors, F2.vectors)


def test_product_measure_matches_extraction():
    A, F = random_su_set(5, (1, 1), seed=4, multiplicity=1)
    prod = product_spectral_measure(A, F)
    ext = model_unitary(A, F).measure.to_strip_measure()
    assert prod.n_atoms == ext.n_atoms
    for x, p, w in ext.atoms():
        j = np.argmin(np.abs(prod.x - x) + np.abs(np.angle(np.exp(1j * (prod.phi - p)))))
        assert prod.w[j] == pytest.approx(w, abs=1e-10)
