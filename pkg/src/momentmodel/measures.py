"""Finitely atomic measures.

Three concrete types are provided:

* :class:`MatrixAtomicMeasure` - PSD-matrix-valued atoms on the real line;
* :class:`StripAtomicMeasure` - nonnegative scalar atoms on the strip
  ``R x [-pi, pi)``;
* :class:`JointMatrixMeasure` - PSD-matrix-valued atoms on
  ``R^r x [-pi, pi)^l``, the common form both of the above embed into and
  the type produced from a commuting operator family.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAtomError, InvalidMeasureError, DomainError
from .kernel import DEFAULT_TOL, Tolerances, as_matrix, hermitian_check, numerical_rank, psd_check


def wrap_angle(phi):
    """Map angles into ``[-pi, pi)``."""
    out = np.mod(np.asarray(phi, dtype=float) + np.pi, 2 * np.pi) - np.pi
    # mod can round up to exactly 2*pi - pi for inputs just below -pi
    out = np.where(out >= np.pi, out - 2 * np.pi, out)
    return float(out) if np.ndim(out) == 0 else out


def angle_distance(a, b):
    d = np.abs(wrap_angle(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))
    return d


def _check_weight(W, N, tol, where):
    try:
        W = as_matrix(W, where)
    except ValueError as exc:
        raise InvalidMeasureError(str(exc)) from exc
    if W.shape != (N, N):
        raise InvalidMeasureError(f"{where} has shape {W.shape}, expected {(N, N)}")
    if not hermitian_check(W, tol):
        raise InvalidMeasureError(f"{where} is not Hermitian")
    ok, lo = psd_check(W, tol)
    if not ok:
        raise InvalidMeasureError(f"{where} is not PSD (smallest eigenvalue {lo:.3g})")
    return W


@dataclass(frozen=True)
class ScalarAtomicMeasure:
    positions: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1)
        mass = np.asarray(self.masses, dtype=float).reshape(-1)
        if pos.shape != mass.shape:
            raise InvalidMeasureError("positions and masses differ in length")
        if np.any(mass < 0):
            raise InvalidMeasureError("masses must be nonnegative")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "masses", mass)

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.masses))

    def as_pairs(self):
        return list(zip(self.positions.tolist(), self.masses.tolist()))


@dataclass(frozen=True, eq=False)
class MatrixAtomicMeasure:
    """A ``C^{NxN}``-PSD-valued measure with finitely many atoms on R.

    Atoms are sorted by position on construction; coincident positions are
    rejected.  Weights are validated (Hermitian, PSD within ``psd_eps``)
    and never repaired.
    """

    positions: np.ndarray
    weights: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False, repr=False)

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1)
        if pos.size == 0:
            raise InvalidMeasureError("a measure needs at least one atom")
        if not np.all(np.isfinite(pos)):
            raise InvalidMeasureError("atom positions must be finite")
        raw = np.asarray(self.weights, dtype=np.complex128)
        if raw.ndim != 3 or raw.shape[0] != pos.size or raw.shape[1] != raw.shape[2] or raw.shape[1] < 1:
            raise InvalidMeasureError(f"weights must have shape (K, N, N); got {raw.shape} for K={pos.size}")
        N = raw.shape[1]
        order = np.argsort(pos, kind="stable")
        pos = pos[order]
        if np.any(np.diff(pos) <= 0):
            raise InvalidMeasureError("atom positions must be distinct")
        W = np.stack([_check_weight(raw[j], N, self.tol, f"weight of atom at t={pos[i]:g}")
                      for i, j in enumerate(order)])
        if not np.any(W):
            raise InvalidMeasureError("at least one weight must be nonzero")
        pos.setflags(write=False)
        W.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", W)

    @classmethod
    def from_atoms(cls, atoms, tol: Tolerances = DEFAULT_TOL) -> "MatrixAtomicMeasure":
        """Build from an iterable of ``(t, W)`` pairs."""
        atoms = list(atoms)
        if not atoms:
            raise InvalidMeasureError("a measure needs at least one atom")
        t = [a[0] for a in atoms]
        W = [np.atleast_2d(np.asarray(a[1], dtype=np.complex128)) for a in atoms]
        shapes = {w.shape for w in W}
        if len(shapes) != 1:
            raise InvalidMeasureError(f"weights have inconsistent shapes {sorted(shapes)}")
        return cls(np.array(t, dtype=float), np.stack(W), tol)

    @property
    def N(self) -> int:
        return self.weights.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.positions.size

    def __len__(self):
        return self.n_atoms

    def atoms(self):
        return list(zip(self.positions.tolist(), self.weights))

    def __eq__(self, other):
        if not isinstance(other, MatrixAtomicMeasure):
            return NotImplemented
        return (np.array_equal(self.positions, other.positions)
                and np.array_equal(self.weights, other.weights))

    def as_joint(self) -> "JointMatrixMeasure":
        return JointMatrixMeasure(self.positions[:, None], np.zeros((self.n_atoms, 0)), self.weights, self.tol)


@dataclass(frozen=True, eq=False)
class StripAtomicMeasure:
    """Nonnegative scalar atoms ``(x_j, phi_j, w_j)`` on the strip.

    Angles are wrapped into ``[-pi, pi)``; atoms are sorted by ``(x, phi)``.
    Two atoms closer than ``cluster_eps`` in the sup-metric (angles compared
    modulo ``2*pi``) are rejected as coincident.
    """

    x: np.ndarray
    phi: np.ndarray
    w: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1)
        phi = np.asarray(self.phi, dtype=float).reshape(-1)
        w = np.asarray(self.w, dtype=float).reshape(-1)
        if not (x.size == phi.size == w.size):
            raise InvalidMeasureError("x, phi and w must have equal length")
        if x.size == 0:
            raise InvalidMeasureError("a measure needs at least one atom")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(phi)) and np.all(np.isfinite(w))):
            raise InvalidMeasureError("atom data must be finite")
        if np.any(w <= 0):
            raise InvalidMeasureError("strip atom masses must be positive")
        phi = np.atleast_1d(wrap_angle(phi))
        order = np.lexsort((phi, x))
        x, phi, w = x[order], phi[order], w[order]
        eps = self.tol.cluster_eps
        dx = np.abs(x[:, None] - x[None, :])
        dphi = angle_distance(phi[:, None], phi[None, :])
        close = np.maximum(dx, dphi) <= eps
        np.fill_diagonal(close, False)
        if np.any(close):
            raise InvalidMeasureError("strip atoms must be pairwise distinct")
        for arr in (x, phi, w):
            arr.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_atoms(cls, atoms, tol: Tolerances = DEFAULT_TOL) -> "StripAtomicMeasure":
        atoms = list(atoms)
        if not atoms:
            raise InvalidMeasureError("a measure needs at least one atom")
        x, phi, w = zip(*atoms)
        return cls(np.array(x, dtype=float), np.array(phi, dtype=float), np.array(w, dtype=float), tol)

    @property
    def n_atoms(self) -> int:
        return self.x.size

    def __len__(self):
        return self.n_atoms

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.w))

    def atoms(self):
        return list(zip(self.x.tolist(), self.phi.tolist(), self.w.tolist()))

    def __eq__(self, other):
        if not isinstance(other, StripAtomicMeasure):
            return NotImplemented
        return (np.array_equal(self.x, other.x) and np.array_equal(self.phi, other.phi)
                and np.array_equal(self.w, other.w))

    def as_joint(self) -> "JointMatrixMeasure":
        W = self.w.astype(np.complex128)[:, None, None]
        return JointMatrixMeasure(self.x[:, None], self.phi[:, None], W, self.tol)


@dataclass(frozen=True, eq=False)
class JointMatrixMeasure:
    """PSD-matrix-valued atoms on ``R^r x [-pi, pi)^l``.

    ``x`` has shape ``(K, r)``, ``phi`` shape ``(K, l)`` and ``weights``
    shape ``(K, N, N)``.  Zero weights are allowed here because spectral
    points of an operator family need not all be charged by a vector
    family.
    """

    x: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, compare=False, repr=False)

    def __post_init__(self):
        W = np.asarray(self.weights, dtype=np.complex128)
        if W.ndim != 3 or W.shape[1] != W.shape[2]:
            raise InvalidMeasureError(f"weights must have shape (K, N, N); got {W.shape}")
        K = W.shape[0]
        if K == 0:
            raise InvalidMeasureError("a measure needs at least one atom")
        x = np.asarray(self.x, dtype=float).reshape(K, -1)
        phi = np.asarray(self.phi, dtype=float).reshape(K, -1)
        if x.shape[1] + phi.shape[1] < 1:
            raise InvalidMeasureError("order (r, l) must satisfy r + l >= 1")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(phi))):
            raise InvalidMeasureError("atom coordinates must be finite")
        phi = np.asarray(wrap_angle(phi), dtype=float).reshape(K, -1)
        for j in range(K):
            _check_weight(W[j], W.shape[1], self.tol, f"weight {j}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "weights", W)

    @property
    def order(self) -> tuple[int, int]:
        return self.x.shape[1], self.phi.shape[1]

    @property
    def N(self) -> int:
        return self.weights.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.weights.shape[0]

    def to_matrix_measure(self) -> MatrixAtomicMeasure:
        """Reinterpret an order ``(1, 0)`` measure as a measure on R."""
        if self.order != (1, 0):
            raise DomainError(f"order {self.order} is not (1, 0)")
        return MatrixAtomicMeasure(self.x[:, 0], self.weights, self.tol)

    def to_strip_measure(self) -> StripAtomicMeasure:
        """Reinterpret an order ``(1, 1)`` scalar measure on the strip.

        Atoms with zero mass are dropped.
        """
        if self.order != (1, 1) or self.N != 1:
            raise DomainError(f"need order (1, 1) and N = 1, got order {self.order}, N = {self.N}")
        w = self.weights[:, 0, 0].real
        keep = w > 0
        return StripAtomicMeasure(self.x[keep, 0], self.phi[keep, 0], w[keep], self.tol)


def as_joint(measure) -> JointMatrixMeasure:
    if isinstance(measure, JointMatrixMeasure):
        return measure
    if isinstance(measure, (MatrixAtomicMeasure, StripAtomicMeasure)):
        return measure.as_joint()
    raise TypeError(f"not a measure: {type(measure).__name__}")


def trace_measure(M: MatrixAtomicMeasure) -> ScalarAtomicMeasure:
    """The scalar trace measure; zero-trace atoms keep mass 0."""
    traces = np.einsum("jii->j", M.weights).real
    return ScalarAtomicMeasure(M.positions.copy(), np.maximum(traces, 0.0))


def radon_nikodym(M: MatrixAtomicMeasure, j: int) -> np.ndarray:
    """Density of ``M`` with respect to its trace measure at atom ``j``."""
    W = M.weights[j]
    tr = float(np.trace(W).real)
    if tr <= 0:
        raise DegenerateAtomError(f"atom {j} has zero trace")
    return W / tr


def l2_dimension(M, tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of L^2(M): the sum of the ranks of the atom weights."""
    J = as_joint(M)
    return int(sum(numerical_rank(W, tol) for W in J.weights))
