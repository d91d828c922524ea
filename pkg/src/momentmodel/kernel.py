"""Dense complex matrix utilities.

All matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every
function here is deterministic for a fixed input.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used throughout the package.

    Attributes
    ----------
    psd_eps : float
        Relative eigenvalue floor for accepting a matrix as PSD.
    rank_eps : float
        Relative singular value cutoff for numerical rank.
    residual_eps : float
        Bound on operator-identity residuals.
    cluster_eps : float
        Radius used to group joint eigenvalues.
    """

    psd_eps: float = 1e-10
    rank_eps: float = 1e-10
    residual_eps: float = 1e-9
    cluster_eps: float = 1e-8

    def __post_init__(self):
        for name in ("psd_eps", "rank_eps", "residual_eps", "cluster_eps"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be a finite nonnegative number, got {value!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Return ``A`` as a finite 2-D complex array."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError(f"{name} has non-finite entries")
    return M


def _square(A, name="matrix") -> np.ndarray:
    M = as_matrix(A, name)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def max_norm(A) -> float:
    """Largest absolute entry (0 for an empty array)."""
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def relative_residual(A, B) -> float:
    """``max|A - B| / max(1, max|B|)``."""
    return max_norm(np.asarray(A) - np.asarray(B)) / max(1.0, max_norm(B))


def hermitian_check(A, tol: Tolerances = DEFAULT_TOL) -> bool:
    A = _square(A)
    return max_norm(A - A.conj().T) <= tol.residual_eps * max(1.0, max_norm(A))


def unitary_check(U, tol: Tolerances = DEFAULT_TOL) -> bool:
    U = _square(U)
    return max_norm(U.conj().T @ U - np.eye(U.shape[0])) <= tol.residual_eps


def hermitian_part(A) -> np.ndarray:
    A = np.asarray(A)
    return 0.5 * (A + A.conj().T)


def eigh(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    Only the Hermitian part of ``A`` is used, so tiny asymmetries from
    round-off do not leak into the result.
    """
    A = _square(A)
    return np.linalg.eigh(hermitian_part(A))


def normal_eig(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a normal matrix via the complex Schur form.

    For a normal matrix the Schur factor is diagonal up to round-off, so the
    diagonal gives the eigenvalues and the unitary factor the eigenvectors.
    """
    A = _square(A)
    T, Z = scipy.linalg.schur(A, output="complex")
    return np.diag(T).copy(), Z


def psd_check(A, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, float]:
    """Test positive semidefiniteness.

    Returns
    -------
    ok : bool
        ``min eig >= -psd_eps * max(1, max eig)``.
    min_eig : float
        The smallest eigenvalue.
    """
    A = _square(A)
    if not hermitian_check(A, tol):
        raise DomainError("psd_check requires a Hermitian matrix")
    if A.shape[0] == 0:
        return True, 0.0
    w = np.linalg.eigvalsh(hermitian_part(A))
    lo, hi = float(w[0]), float(w[-1])
    return lo >= -tol.psd_eps * max(1.0, hi), lo


def numerical_rank(A, tol: Tolerances = DEFAULT_TOL) -> int:
    A = as_matrix(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol.rank_eps * s[0]))


def psd_factor(W, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Factor a PSD matrix as ``W = C C*`` with ``C`` of full column rank.

    Eigenvalues below the rank cutoff (including slightly negative ones
    accepted by :func:`psd_check`) are dropped.
    """
    W = _square(W)
    ok, _ = psd_check(W, tol)
    if not ok:
        raise DomainError("psd_factor requires a PSD matrix")
    w, Q = eigh(W)
    if W.shape[0] == 0 or w[-1] <= 0:
        return np.zeros((W.shape[0], 0), dtype=np.complex128)
    keep = w > tol.rank_eps * w[-1]
    # dominant directions first; the stable sort keeps eigh's order among ties
    idx = np.flatnonzero(keep)
    idx = idx[np.argsort(-w[idx], kind="stable")]
    return Q[:, idx] * np.sqrt(w[idx])


def range_basis(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis for the numerical column space of ``A``."""
    A = as_matrix(A)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.complex128)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0:
        return U[:, :0]
    return U[:, s > tol.rank_eps * s[0]]


def pinv(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with the relative ``rank_eps`` cutoff."""
    A = as_matrix(A)
    if A.size == 0:
        return np.zeros(A.shape[::-1], dtype=np.complex128)
    return np.linalg.pinv(A, rcond=tol.rank_eps)


def solve(A, B) -> np.ndarray:
    A = _square(A)
    return np.linalg.solve(A, np.asarray(B, dtype=np.complex128))


def condition_number(A) -> float:
    A = _square(A)
    if A.shape[0] == 0:
        return 1.0
    s = np.linalg.svd(A, compute_uv=False)
    return float("inf") if s[-1] == 0 else float(s[0] / s[-1])


def commutator_norm(A, B) -> float:
    return max_norm(A @ B - B @ A)
