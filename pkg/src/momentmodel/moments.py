"""Power moments of atomic measures and their positivity matrices."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMeasureError, WindowError
from .kernel import DEFAULT_TOL, Tolerances, hermitian_check, max_norm
from .measures import MatrixAtomicMeasure, StripAtomicMeasure
from .polynomials import strip_indices


@dataclass(frozen=True, eq=False)
class MatrixMomentSequence:
    """Hermitian moments ``S_0, ..., S_{n_max}`` stacked as ``(n_max+1, N, N)``."""

    S: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False, repr=False)

    def __post_init__(self):
        S = np.asarray(self.S, dtype=np.complex128)
        if S.ndim != 3 or S.shape[1] != S.shape[2] or S.shape[0] < 1:
            raise InvalidMeasureError(f"moments must have shape (n+1, N, N), got {S.shape}")
        for n, Sn in enumerate(S):
            if not hermitian_check(Sn, self.tol):
                raise InvalidMeasureError(f"moment S_{n} is not Hermitian")
        S = S.copy()
        S.setflags(write=False)
        object.__setattr__(self, "S", S)

    @property
    def N(self) -> int:
        return self.S.shape[1]

    @property
    def n_max(self) -> int:
        return self.S.shape[0] - 1

    def __getitem__(self, n):
        return self.S[n]

    def __eq__(self, other):
        if not isinstance(other, MatrixMomentSequence):
            return NotImplemented
        return np.array_equal(self.S, other.S)


@dataclass(frozen=True, eq=False)
class StripMomentTable:
    """Moments ``s[m, n]`` for ``0 <= m <= m_max`` and ``|n| <= n_max``.

    ``values`` has shape ``(m_max+1, 2*n_max+1)``; column ``n + n_max``
    holds index ``n``.  Use :meth:`get` for signed indexing.
    """

    values: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False, repr=False)
    check_symmetry: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 2 or v.shape[1] % 2 != 1:
            raise InvalidMeasureError(f"table must have shape (m_max+1, 2*n_max+1), got {v.shape}")
        if self.check_symmetry:
            resid = max_norm(v - v[:, ::-1].conj())
            if resid > self.tol.residual_eps * max(1.0, max_norm(v)):
                raise InvalidMeasureError(f"table violates s[m,-n] = conj(s[m,n]) (residual {resid:.3g})")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m_max(self) -> int:
        return self.values.shape[0] - 1

    @property
    def n_max(self) -> int:
        return (self.values.shape[1] - 1) // 2

    def get(self, m, n):
        m = np.asarray(m)
        n = np.asarray(n)
        if np.any(m < 0) or np.any(m > self.m_max) or np.any(np.abs(n) > self.n_max):
            raise WindowError(f"index outside moment window m<={self.m_max}, |n|<={self.n_max}")
        return self.values[m, n + self.n_max]

    def symmetry_residual(self) -> float:
        return max_norm(self.values - self.values[:, ::-1].conj())

    def __eq__(self, other):
        if not isinstance(other, StripMomentTable):
            return NotImplemented
        return np.array_equal(self.values, other.values)


def matrix_moments(M: MatrixAtomicMeasure, n_max: int) -> MatrixMomentSequence:
    """``S_n = sum_j t_j**n W_j`` for ``n = 0..n_max`` (``0**0 = 1``)."""
    if n_max < 0:
        raise WindowError("n_max must be nonnegative")
    powers = M.positions[None, :] ** np.arange(n_max + 1)[:, None]
    # fixed summation order over atoms (ascending position) via explicit loop
    S = np.zeros((n_max + 1, M.N, M.N), dtype=np.complex128)
    for j in range(M.n_atoms):
        S += powers[:, j, None, None] * M.weights[j]
    return MatrixMomentSequence(S, M.tol)


def block_hankel(S: MatrixMomentSequence, n: int) -> np.ndarray:
    """``Gamma_n``: block ``(k, l)`` is ``S_{k+l}``; flat index ``k*N + s``."""
    if n < 0 or 2 * n > S.n_max:
        raise WindowError(f"block_hankel({n}) needs moments up to {2 * n}, have {S.n_max}")
    N = S.N
    G = np.empty(((n + 1) * N, (n + 1) * N), dtype=np.complex128)
    for k in range(n + 1):
        for l in range(n + 1):
            G[k * N:(k + 1) * N, l * N:(l + 1) * N] = S.S[k + l]
    return G


def strip_moments(sigma: StripAtomicMeasure, m_max: int, n_max: int) -> StripMomentTable:
    """``s[m, n] = sum_j x_j**m exp(i n phi_j) w_j``."""
    if m_max < 0 or n_max < 0:
        raise WindowError("moment window must be nonnegative")
    m = np.arange(m_max + 1)
    n = np.arange(-n_max, n_max + 1)
    vals = np.zeros((m_max + 1, 2 * n_max + 1), dtype=np.complex128)
    for xj, pj, wj in zip(sigma.x, sigma.phi, sigma.w):
        vals += wj * (xj ** m)[:, None] * np.exp(1j * n * pj)[None, :]
    return StripMomentTable(vals, sigma.tol)


def devinatz_gram(s: StripMomentTable, m_cap: int, n_cap: int) -> np.ndarray:
    """Matrix of the Devinatz form over index pairs ``(m, n)`` in (m, n) order.

    Entry ``((m, n), (k, l))`` is ``s[m + k, n - l]``.
    """
    if m_cap < 0 or n_cap < 0 or 2 * m_cap > s.m_max or 2 * n_cap > s.n_max:
        raise WindowError(
            f"devinatz_gram({m_cap}, {n_cap}) needs window ({2 * m_cap}, {2 * n_cap}), "
            f"table has ({s.m_max}, {s.n_max})")
    idx = np.array(strip_indices(m_cap, n_cap))
    msum = idx[:, 0][:, None] + idx[:, 0][None, :]
    ndiff = idx[:, 1][:, None] - idx[:, 1][None, :]
    return s.get(msum, ndiff).astype(np.complex128)
