"""Geometry of L^2 of an atomic measure.

For an atomic matrix measure the space ``L^2(M)`` is finite dimensional:
a function only matters through its values ``f(t_j)`` and the seminorm
``sum_j f(t_j) W_j f(t_j)^*``.  Factoring ``W_j = C_j C_j^*`` identifies
``L^2(M)`` with ``C^{r_1} + ... + C^{r_K}`` via ``f -> (f(t_j) C_j)_j``;
this is :class:`L2Model`.  Coordinates are column vectors and the inner
product is ``<u, v> = v^* u`` (linear in the first slot).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .kernel import DEFAULT_TOL, Tolerances, numerical_rank, psd_factor
from .measures import JointMatrixMeasure, MatrixAtomicMeasure, StripAtomicMeasure, as_joint
from .polynomials import (PowerTrigPolynomial, VectorPolynomial, eval_strip, eval_vector,
                          monomial_family_strip, monomial_family_vector)


def _check_dim(f: VectorPolynomial, M: MatrixAtomicMeasure):
    if f.N != M.N:
        raise DimensionError(f"polynomial has {f.N} components, measure has N = {M.N}")


def inner_product_vector(f: VectorPolynomial, g: VectorPolynomial, M: MatrixAtomicMeasure) -> complex:
    """``sum_j f(t_j) W_j g(t_j)^*``."""
    _check_dim(f, M)
    _check_dim(g, M)
    F = eval_vector(f, M.positions)
    G = eval_vector(g, M.positions)
    return complex(np.einsum("ja,jab,jb->", F, M.weights, G.conj()))


def inner_product_strip(p: PowerTrigPolynomial, q: PowerTrigPolynomial, sigma: StripAtomicMeasure) -> complex:
    """``sum_j p(x_j, phi_j) conj(q(x_j, phi_j)) w_j``."""
    P = eval_strip(p, sigma.x, sigma.phi)
    Q = eval_strip(q, sigma.x, sigma.phi)
    return complex(np.sum(P * Q.conj() * sigma.w))


def _family_values(family, measure) -> np.ndarray:
    """Values of each family member at each atom, shape ``(P, K, N)``."""
    if isinstance(measure, MatrixAtomicMeasure):
        for f in family:
            _check_dim(f, measure)
        return np.stack([eval_vector(f, measure.positions) for f in family])
    if isinstance(measure, StripAtomicMeasure):
        vals = np.stack([np.atleast_1d(eval_strip(p, measure.x, measure.phi)) for p in family])
        return vals[:, :, None]
    raise TypeError(f"unsupported measure type {type(measure).__name__}")


def gram_matrix(family, measure) -> np.ndarray:
    """``G[p, q] = (family[p], family[q])`` in ``L^2(measure)``."""
    family = list(family)
    if not family:
        raise DimensionError("family must be nonempty")
    E = _family_values(family, measure)
    W = as_joint(measure).weights
    return np.einsum("pja,jab,qjb->pq", E, W, E.conj())


@dataclass(frozen=True, eq=False)
class L2Model:
    """Coordinate model ``L^2(M) = sum_j C^{r_j}``.

    Attributes
    ----------
    measure : JointMatrixMeasure
        The measure in joint form (order ``(r, l)``).
    factors : tuple of ndarray
        ``C_j`` of shape ``(N, r_j)`` with ``W_j = C_j C_j^*``.
    offsets : ndarray
        Start of block ``j`` in the coordinate vector; ``offsets[-1] == D``.
    """

    measure: JointMatrixMeasure
    factors: tuple
    offsets: np.ndarray
    source: object = field(default=None, repr=False)

    @classmethod
    def from_measure(cls, measure, tol: Tolerances = DEFAULT_TOL) -> "L2Model":
        J = as_joint(measure)
        factors = tuple(psd_factor(W, tol) for W in J.weights)
        offsets = np.concatenate([[0], np.cumsum([C.shape[1] for C in factors])]).astype(int)
        return cls(J, factors, offsets, measure)

    @property
    def dim(self) -> int:
        return int(self.offsets[-1])

    @property
    def block_sizes(self) -> list[int]:
        return [C.shape[1] for C in self.factors]

    def embed_values(self, values) -> np.ndarray:
        """Coordinates of the function with atom values ``values`` (``(K, N)``)."""
        values = np.asarray(values, dtype=np.complex128).reshape(self.measure.n_atoms, self.measure.N)
        return np.concatenate([values[j] @ C for j, C in enumerate(self.factors)])

    def embed(self, f) -> np.ndarray:
        J = self.measure
        if isinstance(f, VectorPolynomial):
            if J.order[0] < 1:
                raise DimensionError("vector polynomials need a real coordinate")
            return self.embed_values(eval_vector(f, J.x[:, 0]))
        if isinstance(f, PowerTrigPolynomial):
            if J.order != (1, 1) or J.N != 1:
                raise DimensionError("power-trigonometric polynomials need an order (1, 1) scalar measure")
            return self.embed_values(eval_strip(f, J.x[:, 0], J.phi[:, 0])[:, None])
        raise TypeError(f"cannot embed {type(f).__name__}")

    def embed_family(self, family) -> np.ndarray:
        """Columns are the coordinates of the family members."""
        family = list(family)
        if not family:
            return np.zeros((self.dim, 0), dtype=np.complex128)
        return np.stack([self.embed(f) for f in family], axis=1)

    def constant_vector(self, s: int) -> np.ndarray:
        """Coordinates of the constant function ``e_s``."""
        vals = np.zeros((self.measure.n_atoms, self.measure.N), dtype=np.complex128)
        vals[:, s] = 1.0
        return self.embed_values(vals)

    def indicator(self, j: int, s: int) -> np.ndarray:
        """Coordinates of ``chi_{u_j} e_s``."""
        vals = np.zeros((self.measure.n_atoms, self.measure.N), dtype=np.complex128)
        vals[j, s] = 1.0
        return self.embed_values(vals)

    def _block_diag(self, per_atom) -> np.ndarray:
        return np.diag(np.repeat(np.asarray(per_atom), self.block_sizes)).astype(np.complex128)


def multiplication_matrix_X(model: L2Model, coordinate: int = 0) -> np.ndarray:
    """Multiplication by the real coordinate ``x_{coordinate}``."""
    return model._block_diag(model.measure.x[:, coordinate])


def multiplication_matrix_W(model: L2Model, coordinate: int = 0) -> np.ndarray:
    """Multiplication by ``exp(i phi_{coordinate})``."""
    return model._block_diag(np.exp(1j * model.measure.phi[:, coordinate]))


@dataclass(frozen=True)
class DensityReport:
    space_dim: int
    span_dim: int
    saturation_degree: int | None
    dense: bool
    saturation_window: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        out = {
            "space_dim": self.space_dim,
            "span_dim": self.span_dim,
            "saturation_degree": self.saturation_degree if self.saturation_degree is not None else "not reached",
            "dense": self.dense,
        }
        if self.saturation_window is not None:
            out["saturation_window"] = list(self.saturation_window)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "DensityReport":
        sat = d["saturation_degree"]
        win = d.get("saturation_window")
        return cls(int(d["space_dim"]), int(d["span_dim"]), None if sat == "not reached" else int(sat),
                   bool(d["dense"]), tuple(win) if win is not None else None)


def _span_rank(E: np.ndarray, tol: Tolerances) -> int:
    # rank of the Gram matrix E^* E, computed from E itself so the
    # conditioning is not squared; columns are normalized first
    norms = np.linalg.norm(E, axis=0)
    keep = norms > 0
    if not np.any(keep):
        return 0
    return numerical_rank(E[:, keep] / norms[keep], tol)


def density_test(measure, tol: Tolerances = DEFAULT_TOL) -> DensityReport:
    """Decide whether polynomials fill ``L^2(measure)``.

    The monomial family is grown in rounds (degree cap ``K-1``, ``2K-1``,
    ...) until two consecutive caps give the same span dimension.  The
    span dimension is the rank of the Gram matrix of the family.
    """
    model = L2Model.from_measure(measure, tol)
    K = model.measure.n_atoms
    if isinstance(measure, MatrixAtomicMeasure):
        N = measure.N

        def family(cap):
            return monomial_family_vector(N, cap)

        space_dim = model.dim
    elif isinstance(measure, StripAtomicMeasure):
        def family(cap):
            return monomial_family_strip(cap, cap)

        space_dim = K
    else:
        raise TypeError(f"unsupported measure type {type(measure).__name__}")

    cap = K - 1
    prev = _span_rank(model.embed_family(family(cap)), tol)
    while True:
        nxt_cap = cap + K
        E = model.embed_family(family(nxt_cap))
        nxt = _span_rank(E, tol)
        if nxt == prev:
            break
        cap, prev = nxt_cap, nxt
    span_dim = prev

    if isinstance(measure, MatrixAtomicMeasure):
        E = model.embed_family(family(cap))
        sat = next(d for d in range(cap + 1) if _span_rank(E[:, : (d + 1) * N], tol) == span_dim)
        window = None
    else:
        sat = next(c for c in range(cap + 1)
                   if _span_rank(model.embed_family(family(c)), tol) == span_dim)
        window = None
        for total in range(2 * sat + 1):
            for m in range(max(0, total - sat), min(total, sat) + 1):
                n = total - m
                if _span_rank(model.embed_family(monomial_family_strip(m, n)), tol) == span_dim:
                    window = (m, n)
                    break
            if window is not None:
                break
    return DensityReport(space_dim, span_dim, sat, span_dim == space_dim, window)
