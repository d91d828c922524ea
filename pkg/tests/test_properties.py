"""Randomized invariants checked with hypothesis."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from momentmodel.generators import random_matrix_measure, random_strip_measure
from momentmodel.jsonio import dumps, from_json, loads, to_json
from momentmodel.kernel import numerical_rank, psd_check, psd_factor
from momentmodel.l2space import density_test, gram_matrix
from momentmodel.measures import l2_dimension, wrap_angle
from momentmodel.moments import block_hankel, devinatz_gram, matrix_moments, strip_moments
from momentmodel.polynomials import VectorPolynomial, eval_vector, monomial_family_strip, monomial_family_vector
from momentmodel.spectral import cyclicity_check, random_su_set, spectral_multiplicity

seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=60, deadline=None)


@SETTINGS
@given(seeds, st.integers(0, 4))
def test_hankel_is_gram_of_monomials(seed, n):
    M = random_matrix_measure(seed)
    H = block_hankel(matrix_moments(M, 2 * n), n)
    G = gram_matrix(monomial_family_vector(M.N, n), M)
    # monomial (k, s) sits at flat index kN + s, matching the Hankel layout
    assert np.max(np.abs(G - H)) <= 1e-9 * max(1.0, np.abs(H).max())
    assert psd_check(H)[0]


@SETTINGS
@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_devinatz_gram_is_psd(seed, m_cap, n_cap):
    sigma = random_strip_measure(seed)
    G = devinatz_gram(strip_moments(sigma, 2 * m_cap, 2 * n_cap), m_cap, n_cap)
    assert psd_check(G)[0]
    assert numerical_rank(G) <= sigma.n_atoms
    Gd = gram_matrix(monomial_family_strip(m_cap, n_cap), sigma)
    assert np.max(np.abs(G - Gd)) <= 1e-9 * max(1.0, np.abs(G).max())


@SETTINGS
@given(seeds)
def test_psd_factor_reconstructs(seed):
    rng = np.random.default_rng(seed)
    N = int(rng.integers(1, 6))
    r = int(rng.integers(1, N + 1))
    B = rng.standard_normal((N, r)) + 1j * rng.standard_normal((N, r))
    W = B @ B.conj().T
    C = psd_factor(W)
    assert C.shape == (N, r)
    assert np.max(np.abs(C @ C.conj().T - W)) <= 1e-12 * max(1.0, np.abs(W).max())


@SETTINGS
@given(seeds)
def test_density_always_holds_for_atomic_measures(seed):
    M = random_matrix_measure(seed)
    rep = density_test(M)
    assert rep.dense and rep.space_dim == l2_dimension(M)
    assert rep.saturation_degree <= M.n_atoms - 1


@SETTINGS
@given(st.floats(-50, 50))
def test_wrap_angle_range(phi):
    w = wrap_angle(phi)
    assert -np.pi <= w < np.pi
    assert abs(np.exp(1j * w) - np.exp(1j * phi)) <= 1e-12


@SETTINGS
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=1,
                max_size=5), st.floats(-3, 3))
def test_horner_matches_power_sum(coeffs, t):
    p = VectorPolynomial.from_components([coeffs])
    direct = sum(c * t ** k for k, c in enumerate(coeffs))
    assert abs(eval_vector(p, t)[0] - direct) <= 1e-9 * max(1.0, abs(direct))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 8), st.integers(0, 2), st.integers(0, 2))
def test_generated_families_are_minimal_and_cyclic(seed, n, r, l):
    if r + l == 0:
        r = 1
    A, F = random_su_set(n, (r, l), seed)
    assert F.N == spectral_multiplicity(A)
    assert cyclicity_check(A, F)
    if F.N > 1:
        assert not cyclicity_check(A, F.vectors[:, :-1])


@SETTINGS
@given(seeds)
def test_json_round_trip_is_exact(seed):
    for obj in (random_matrix_measure(seed), random_strip_measure(seed)):
        text = dumps(to_json(obj))
        again = from_json(loads(text))
        assert again == obj
        assert dumps(to_json(again)) == text
