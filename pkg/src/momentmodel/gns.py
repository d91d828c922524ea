"""Hilbert spaces realized from Gram data, and the shift operators on them.

A positive semidefinite Gram matrix ``G`` over an index set is realized as
vectors ``v_p`` in ``C^D`` (``D = rank G``) with ``<v_p, v_q> = G[p, q]``.
Dependent vectors are kept; operators defined on index subsets are fitted
by least squares over the span of their domain vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PositivityError, WindowError
from .kernel import DEFAULT_TOL, Tolerances, eigh, max_norm, pinv, psd_check
from .l2space import L2Model, multiplication_matrix_W, multiplication_matrix_X
from .moments import MatrixMomentSequence, StripMomentTable, block_hankel, devinatz_gram
from .polynomials import monomial_family_strip, monomial_family_vector, strip_indices


@dataclass(frozen=True, eq=False)
class GnsSpace:
    """Embedded vectors for a PSD Gram matrix.

    Attributes
    ----------
    gram : ndarray
        The ``P x P`` Gram matrix.
    labels : tuple
        Index label of each vector: ``k`` (flat, ``k = m*N + s``) or ``(m, n)``.
    vectors : ndarray
        ``D x P``; column ``p`` is the embedded vector of ``labels[p]``.
    gram_residual : float
        ``max |<v_p, v_q> - G[p, q]|`` with ``<u, v> = v^* u``; this is the
        cost of the rank truncation.
    """

    gram: np.ndarray
    labels: tuple
    vectors: np.ndarray
    gram_residual: float
    _pos: dict = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_pos", {lab: p for p, lab in enumerate(self.labels)})

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def position(self, label) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise WindowError(f"index {label!r} is outside the window") from None

    def __contains__(self, label):
        return label in self._pos

    def vector(self, label) -> np.ndarray:
        return self.vectors[:, self.position(label)]

    def inner(self, a, b) -> complex:
        return complex(np.vdot(self.vector(b), self.vector(a)))


def gns_from_gram(G, labels, tol: Tolerances = DEFAULT_TOL) -> GnsSpace:
    """Realize a PSD Gram matrix; raises :class:`PositivityError` otherwise."""
    G = np.asarray(G, dtype=np.complex128)
    ok, lo = psd_check(G, tol)
    if not ok:
        raise PositivityError(f"Gram matrix is not PSD (smallest eigenvalue {lo:.3g})")
    w, Q = eigh(G)
    keep = w > tol.rank_eps * max(w[-1], 0.0) if w.size and w[-1] > 0 else np.zeros(w.shape, bool)
    idx = np.flatnonzero(keep)[::-1]
    V = (Q[:, idx] * np.sqrt(w[idx])).T
    # <v_p, v_q> = v_q^* v_p, so the Gram identity reads V^* V = G^T
    resid = max_norm(V.conj().T @ V - G.T) if G.size else 0.0
    return GnsSpace(G, tuple(labels), np.ascontiguousarray(V), resid)


def build_gns_hamburger(S: MatrixMomentSequence, n: int, tol: Tolerances = DEFAULT_TOL) -> GnsSpace:
    """Vectors ``x_0 .. x_{(n+1)N-1}`` with ``<x_p, x_q> = Gamma_n[p, q]``."""
    G = block_hankel(S, n)
    return gns_from_gram(G, range(G.shape[0]), tol)


@dataclass(frozen=True, eq=False)
class PartialOperator:
    """A (possibly antilinear) operator fitted on a set of embedded vectors.

    For an antilinear operator the action is ``v -> matrix @ conj(v)``.
    """

    matrix: np.ndarray
    domain: tuple
    image: tuple
    antilinear: bool
    residuals: dict
    flags: dict

    def apply(self, v) -> np.ndarray:
        v = np.asarray(v)
        return self.matrix @ (v.conj() if self.antilinear else v)


def _scale(space: GnsSpace) -> float:
    return max(1.0, max_norm(space.gram))


def fit_operator(space: GnsSpace, mapping, antilinear=False, tol: Tolerances = DEFAULT_TOL) -> PartialOperator:
    """Least-squares operator sending ``v_a`` to ``v_b`` for each ``(a, b)``.

    The matrix vanishes on the orthogonal complement of the domain span.
    ``residuals['consistency']`` is ``max_a |T v_a - v_b|``.
    """
    mapping = list(mapping)
    if not mapping:
        raise WindowError("operator has an empty domain inside the window")
    dom = [space.position(a) for a, _ in mapping]
    img = [space.position(b) for _, b in mapping]
    Vd = space.vectors[:, dom]
    Vt = space.vectors[:, img]
    src = Vd.conj() if antilinear else Vd
    T = Vt @ pinv(src, tol)
    err = T @ src - Vt
    consistency = float(np.max(np.linalg.norm(err, axis=0))) / np.sqrt(_scale(space)) if err.size else 0.0
    res = {"consistency": consistency}
    flags = {"well_defined": consistency <= tol.residual_eps}
    return PartialOperator(T, tuple(a for a, _ in mapping), tuple(b for _, b in mapping), antilinear, res, flags)


def symmetry_residual(space: GnsSpace, op: PartialOperator) -> float:
    """``max |<T v_a, v_b> - <v_a, T v_b>|`` over the domain, relative to the Gram scale."""
    Vd = space.vectors[:, [space.position(a) for a in op.domain]]
    TV = op.matrix @ Vd
    return max_norm(Vd.conj().T @ TV - TV.conj().T @ Vd) / _scale(space)


def isometry_residual(space: GnsSpace, op: PartialOperator) -> float:
    """``max |<T v_a, T v_b> - <v_a, v_b>|`` over the domain."""
    Vd = space.vectors[:, [space.position(a) for a in op.domain]]
    TV = op.apply(Vd)
    return max_norm(TV.conj().T @ TV - Vd.conj().T @ Vd) / _scale(space)


def conjugation_residual(space: GnsSpace, op: PartialOperator) -> float:
    """``max |<J v_a, J v_b> - conj <v_a, v_b>|`` over the domain."""
    Vd = space.vectors[:, [space.position(a) for a in op.domain]]
    JV = op.apply(Vd)
    return max_norm(JV.conj().T @ JV - (Vd.conj().T @ Vd).conj()) / _scale(space)


def shift_operator_A(space: GnsSpace, N: int, tol: Tolerances = DEFAULT_TOL) -> PartialOperator:
    """``x_k -> x_{k+N}`` on the flat-indexed Hankel space."""
    mapping = [(k, k + N) for k in space.labels if (k + N) in space]
    if not mapping:
        raise WindowError(f"no index k with k + {N} inside the window")
    op = fit_operator(space, mapping, tol=tol)
    sym = symmetry_residual(space, op)
    op.residuals["symmetry"] = sym
    op.flags["symmetric"] = sym <= tol.residual_eps
    return op


@dataclass(frozen=True, eq=False)
class StripGns:
    """GNS space of a strip moment table together with ``A0``, ``B0``, ``J0``."""

    space: GnsSpace
    window: tuple
    A0: PartialOperator
    B0: PartialOperator
    J0: PartialOperator
    residuals: dict


def build_gns_strip(s: StripMomentTable, window, tol: Tolerances = DEFAULT_TOL) -> StripGns:
    """Vectors ``x_{m,n}`` (``m <= m_w``, ``|n| <= n_w``) with ``<x_{m,n}, x_{k,l}> = s[m+k, n-l]``.

    ``A0: x_{m,n} -> x_{m+1,n}``, ``B0: x_{m,n} -> x_{m,n+1}`` and the
    antilinear ``J0: x_{m,n} -> x_{m,-n}`` are fitted on the window.
    """
    mw, nw = (int(v) for v in window)
    if mw < 1 or nw < 1:
        raise WindowError("the strip window needs m_w >= 1 and n_w >= 1 so that shifts exist")
    G = devinatz_gram(s, mw, nw)
    space = gns_from_gram(G, strip_indices(mw, nw), tol)
    labels = space.labels
    A0 = fit_operator(space, [((m, n), (m + 1, n)) for m, n in labels if m + 1 <= mw], tol=tol)
    B0 = fit_operator(space, [((m, n), (m, n + 1)) for m, n in labels if n + 1 <= nw], tol=tol)
    J0 = fit_operator(space, [((m, n), (m, -n)) for m, n in labels], antilinear=True, tol=tol)

    res = {
        "A0_consistency": A0.residuals["consistency"],
        "B0_consistency": B0.residuals["consistency"],
        "J0_consistency": J0.residuals["consistency"],
        "A0_symmetry": symmetry_residual(space, A0),
        "B0_isometry": isometry_residual(space, B0),
        "J0_conjugation": conjugation_residual(space, J0),
        "moment_symmetry": s.symmetry_residual() / max(1.0, max_norm(s.values)),
    }
    common = [(m, n) for m, n in labels if m + 1 <= mw and n + 1 <= nw]
    Vc = space.vectors[:, [space.position(p) for p in common]]
    res["A0B0_commutation"] = (max_norm(A0.matrix @ (B0.matrix @ Vc) - B0.matrix @ (A0.matrix @ Vc))
                               / np.sqrt(_scale(space)))
    A0.residuals["symmetry"] = res["A0_symmetry"]
    A0.flags["symmetric"] = res["A0_symmetry"] <= tol.residual_eps
    B0.residuals["isometry"] = res["B0_isometry"]
    B0.flags["isometric"] = res["B0_isometry"] <= tol.residual_eps
    J0.residuals["conjugation"] = res["J0_conjugation"]
    J0.flags["conjugation"] = res["J0_conjugation"] <= tol.residual_eps
    return StripGns(space, (mw, nw), A0, B0, J0, res)


@dataclass(frozen=True, eq=False)
class ModelMap:
    """Linear map ``U`` from L^2 coordinates to GNS coordinates.

    ``U`` sends the coordinates of each monomial to the matching GNS
    vector.  It is well defined and unitary exactly when the two Gram
    matrices agree and polynomials are dense.
    """

    matrix: np.ndarray
    model: L2Model
    residuals: dict

    def image(self, op: np.ndarray) -> np.ndarray:
        """``U op U^*``: the GNS image of an operator on L^2 coordinates."""
        return self.matrix @ op @ self.matrix.conj().T


def model_map(space: GnsSpace, model: L2Model, family, tol: Tolerances = DEFAULT_TOL) -> ModelMap:
    E = model.embed_family(family)
    V = space.vectors
    U = V @ pinv(E, tol)
    scale = np.sqrt(_scale(space))
    res = {
        "well_defined": max_norm(U @ E - V) / scale,
        "isometry": max_norm(U.conj().T @ U - np.eye(U.shape[1])) if U.size else 0.0,
        "coisometry": max_norm(U @ U.conj().T - np.eye(U.shape[0])) if U.size else 0.0,
    }
    return ModelMap(U, model, res)


def hamburger_model_map(space: GnsSpace, measure, N: int, tol: Tolerances = DEFAULT_TOL) -> ModelMap:
    """Gram-matching map for the flat-indexed space of a matrix measure."""
    deg = len(space.labels) // N - 1
    return model_map(space, L2Model.from_measure(measure, tol), monomial_family_vector(N, deg), tol)


def strip_model_map(strip: StripGns, sigma, tol: Tolerances = DEFAULT_TOL) -> ModelMap:
    mw, nw = strip.window
    return model_map(strip.space, L2Model.from_measure(sigma, tol), monomial_family_strip(mw, nw), tol)


def multiplication_image(mm: ModelMap) -> np.ndarray:
    """GNS image of multiplication by the real coordinate."""
    return mm.image(multiplication_matrix_X(mm.model))


def unitary_image(mm: ModelMap) -> np.ndarray:
    """GNS image of multiplication by ``exp(i phi)``."""
    return mm.image(multiplication_matrix_W(mm.model))


def hamburger_shift_residual(space: GnsSpace, A_hat: np.ndarray, N: int) -> float:
    """``max |A_hat^r x_s - x_{rN+s}|`` over all ``rN+s`` in the window."""
    worst = 0.0
    P = len(space.labels)
    for s in range(N):
        v = space.vector(s)
        for r in range(1, (P - s - 1) // N + 1):
            v = A_hat @ v
            worst = max(worst, float(np.linalg.norm(v - space.vector(r * N + s))))
    return worst / np.sqrt(_scale(space))


def strip_shift_residual(strip: StripGns, A_hat: np.ndarray) -> float:
    """``max |A_hat^r x_{m,n} - x_{m+r,n}|`` over the window."""
    space = strip.space
    mw, nw = strip.window
    worst = 0.0
    for n in range(-nw, nw + 1):
        v = space.vector((0, n))
        for r in range(1, mw + 1):
            v = A_hat @ v
            worst = max(worst, float(np.linalg.norm(v - space.vector((r, n)))))
    return worst / np.sqrt(_scale(space))
