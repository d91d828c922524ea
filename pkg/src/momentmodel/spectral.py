"""Commuting families of Hermitian and unitary matrices and their model.

A commuting SU-set ``(S_1..S_r, U_1..U_l)`` on ``C^n`` has a joint
spectral measure: finitely many points ``u_p = (x, phi)`` with orthogonal
projections ``P_p``.  Given a generating (cyclic) family ``x_0..x_{N-1}``
the matrix measure ``M({u_p}) = ((P_p x_i, x_j))_{ij}`` carries a unitary
``V : L^2(M) -> C^n`` turning each ``S_j`` into multiplication by ``x_j``
and each ``U_k`` into multiplication by ``exp(i phi_k)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .errors import InvalidSUSetError, NonCyclicError, NotCommutingError, WellDefinednessError
from .kernel import (DEFAULT_TOL, Tolerances, as_matrix, commutator_norm, eigh, hermitian_check,
                     hermitian_part, max_norm, pinv, range_basis, solve, unitary_check)
from .l2space import L2Model, multiplication_matrix_W, multiplication_matrix_X
from .measures import JointMatrixMeasure, StripAtomicMeasure, angle_distance, wrap_angle


@dataclass(frozen=True, eq=False)
class SUSet:
    """Hermitian ``S`` and unitary ``U`` matrices acting on ``C^n``.

    Construction validates Hermiticity, unitarity and pairwise commutation;
    the first two raise :class:`InvalidSUSetError`, the last
    :class:`NotCommutingError`.
    """

    S: tuple
    U: tuple
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        S = tuple(as_matrix(s, "S") for s in self.S)
        U = tuple(as_matrix(u, "U") for u in self.U)
        if not S and not U:
            raise InvalidSUSetError("an SU-set needs r + l >= 1 operators")
        shapes = {m.shape for m in S + U}
        if len(shapes) != 1 or next(iter(shapes))[0] != next(iter(shapes))[1]:
            raise InvalidSUSetError(f"operators must share one square shape, got {sorted(shapes)}")
        for j, s in enumerate(S):
            if not hermitian_check(s, self.tol):
                raise InvalidSUSetError(f"S_{j + 1} is not Hermitian")
        for k, u in enumerate(U):
            if not unitary_check(u, self.tol):
                raise InvalidSUSetError(f"U_{k + 1} is not unitary")
        ops = S + U
        names = [f"S_{j + 1}" for j in range(len(S))] + [f"U_{k + 1}" for k in range(len(U))]
        for a in range(len(ops)):
            for b in range(a + 1, len(ops)):
                scale = max(1.0, max_norm(ops[a]) * max_norm(ops[b]))
                c = commutator_norm(ops[a], ops[b])
                if c > self.tol.residual_eps * scale:
                    raise NotCommutingError(f"{names[a]} and {names[b]} do not commute (residual {c:.3g})")
        for m in ops:
            m.setflags(write=False)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "U", U)

    @property
    def order(self) -> tuple[int, int]:
        return len(self.S), len(self.U)

    @property
    def n(self) -> int:
        return (self.S + self.U)[0].shape[0]

    @property
    def operators(self) -> tuple:
        return self.S + self.U


@dataclass(frozen=True, eq=False)
class CyclicFamily:
    """Vectors ``x_0 .. x_{N-1}`` stored as the columns of an ``n x N`` array."""

    vectors: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.vectors, dtype=np.complex128)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2:
            raise ValueError(f"family must be 2-D (n x N), got shape {X.shape}")
        X = X.copy()
        X.setflags(write=False)
        object.__setattr__(self, "vectors", X)

    @property
    def N(self) -> int:
        return self.vectors.shape[1]

    def __getitem__(self, i):
        return self.vectors[:, i]


@dataclass(frozen=True, eq=False)
class JointSpectralMeasure:
    """Joint spectral points with orthonormal bases of their eigenspaces.

    ``x`` is ``(K, r)``, ``phi`` is ``(K, l)`` and ``bases[p]`` is an
    ``n x d_p`` matrix with orthonormal columns spanning ``range(P_p)``.
    """

    x: np.ndarray
    phi: np.ndarray
    bases: tuple

    @property
    def n_points(self) -> int:
        return len(self.bases)

    @property
    def projections(self) -> list[np.ndarray]:
        return [Q @ Q.conj().T for Q in self.bases]

    def points(self):
        return [(tuple(self.x[p]), tuple(self.phi[p])) for p in range(self.n_points)]

    def residuals(self, A: SUSet) -> dict:
        """Residuals of every projection-valued-measure invariant."""
        P = self.projections
        n = A.n
        res = {
            "hermitian": max(max_norm(p - p.conj().T) for p in P),
            "idempotent": max(max_norm(p @ p - p) for p in P),
            "orthogonal": max((max_norm(P[a] @ P[b]) for a in range(len(P)) for b in range(len(P)) if a != b),
                              default=0.0),
            "resolution": max_norm(sum(P) - np.eye(n)),
        }
        res["S"] = max((max_norm(sum(self.x[p, j] * P[p] for p in range(len(P))) - S)
                        for j, S in enumerate(A.S)), default=0.0)
        res["U"] = max((max_norm(sum(np.exp(1j * self.phi[p, k]) * P[p] for p in range(len(P))) - U)
                        for k, U in enumerate(A.U)), default=0.0)
        return res


def _hermitian_generators(A: SUSet) -> list[np.ndarray]:
    # real and imaginary parts of each unitary commute with everything else
    gens = [hermitian_part(s) for s in A.S]
    for u in A.U:
        gens.append(hermitian_part(u))
        gens.append(hermitian_part(-1j * u))
    return gens


def _split(Q, gens, eps):
    if not gens:
        return [Q]
    H = gens[0]
    w, Z = eigh(Q.conj().T @ H @ Q)
    scale = max(1.0, max_norm(H))
    groups = np.split(np.arange(w.size), np.flatnonzero(np.diff(w) > eps * scale) + 1)
    out = []
    for g in groups:
        out.extend(_split(Q @ Z[:, g], gens[1:], eps))
    return out


def _point_of(Q, A: SUSet):
    d = Q.shape[1]
    x = [float(np.trace(Q.conj().T @ s @ Q).real / d) for s in A.S]
    phi = [float(wrap_angle(np.angle(np.trace(Q.conj().T @ u @ Q) / d))) for u in A.U]
    return np.array(x), np.array(phi)


def _sup_distance(x1, p1, x2, p2) -> float:
    d = 0.0
    if x1.size:
        d = max(d, float(np.max(np.abs(x1 - x2))))
    if p1.size:
        d = max(d, float(np.max(angle_distance(p1, p2))))
    return d


def joint_spectral_decomposition(A: SUSet, tol: Tolerances = DEFAULT_TOL) -> JointSpectralMeasure:
    """Simultaneously diagonalize the family and group joint eigenvalues.

    Eigenspaces are split operator by operator (Hermitian eigensolver on the
    compression to each current eigenspace).  Joint points closer than
    ``cluster_eps`` in the sup-metric (angles modulo ``2*pi``) are then
    merged and their bases re-orthonormalized.  Points are returned in
    lexicographic order of ``(x, phi)``.
    """
    n = A.n
    leaves = _split(np.eye(n, dtype=np.complex128), _hermitian_generators(A), tol.cluster_eps)
    pts = [_point_of(Q, A) for Q in leaves]

    # merge leaves whose joint points lie within cluster_eps (union-find)
    parent = list(range(len(leaves)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(len(leaves)):
        for b in range(a + 1, len(leaves)):
            if _sup_distance(*pts[a], *pts[b]) <= tol.cluster_eps:
                parent[find(b)] = find(a)
    groups = {}
    for a in range(len(leaves)):
        groups.setdefault(find(a), []).append(a)

    bases, xs, phis = [], [], []
    for members in groups.values():
        Q = np.concatenate([leaves[a] for a in members], axis=1)
        if len(members) > 1:
            Q, _ = np.linalg.qr(Q)
        x, phi = _point_of(Q, A)
        bases.append(Q)
        xs.append(x)
        phis.append(phi)
    r, l = A.order
    xs = np.array(xs).reshape(len(bases), r)
    phis = np.array(phis).reshape(len(bases), l)
    keys = [tuple(xs[p]) + tuple(phis[p]) for p in range(len(bases))]
    order = sorted(range(len(bases)), key=lambda p: keys[p])
    return JointSpectralMeasure(xs[order], phis[order], tuple(bases[p] for p in order))


def spectral_multiplicity(A: SUSet, tol: Tolerances = DEFAULT_TOL) -> int:
    """Largest joint eigenspace dimension."""
    E = joint_spectral_decomposition(A, tol)
    return max(Q.shape[1] for Q in E.bases)


def generated_subspace(A: SUSet, vectors, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the span of all ``U^a S^b x_i`` (exponents >= 0).

    Computed as the smallest subspace containing the vectors and invariant
    under every operator; for commuting operators that is exactly the span
    of the monomial orbit, and by Cayley-Hamilton exponents below ``n``
    already reach it.
    """
    X = np.asarray(vectors, dtype=np.complex128)
    if X.ndim == 1:
        X = X[:, None]
    n = A.n
    if X.shape[1] == 0 or not np.any(X):
        return np.zeros((n, 0), dtype=np.complex128)
    ops = A.operators
    scale = max(1.0, max(max_norm(op) for op in ops))
    thresh = max(tol.rank_eps, 1e-13) * scale
    Q = range_basis(X / np.max(np.linalg.norm(X, axis=0)), tol)
    frontier = Q
    while frontier.shape[1] and Q.shape[1] < n:
        cand = np.concatenate([op @ frontier for op in ops], axis=1)
        for _ in range(2):
            cand = cand - Q @ (Q.conj().T @ cand)
        U, s, _ = np.linalg.svd(cand, full_matrices=False)
        new = U[:, s > thresh]
        if new.shape[1] == 0:
            break
        new = new - Q @ (Q.conj().T @ new)
        new, _ = np.linalg.qr(new)
        Q = np.concatenate([Q, new], axis=1)
        frontier = new
    return Q


def cyclicity_check(A: SUSet, F, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff the operator orbit of the family spans ``C^n``."""
    X = F.vectors if isinstance(F, CyclicFamily) else F
    if np.asarray(X).shape[0] != A.n:
        raise ValueError(f"family vectors have length {np.asarray(X).shape[0]}, space has dimension {A.n}")
    return generated_subspace(A, X, tol).shape[1] == A.n


def extract_matrix_measure(E: JointSpectralMeasure, F: CyclicFamily,
                           tol: Tolerances = DEFAULT_TOL) -> JointMatrixMeasure:
    """One atom per joint point with weight ``((P_p x_i, x_j))_{i,j}``.

    Raises :class:`NonCyclicError` when some eigenspace is not reached by
    the projected family (equivalent to the family not being cyclic).
    """
    X = F.vectors
    weights = []
    for p, Q in enumerate(E.bases):
        B = Q.conj().T @ X  # coordinates of P_p x_i inside the eigenspace
        s = np.linalg.svd(B, compute_uv=False)
        if s.size < Q.shape[1] or s[-1] <= tol.rank_eps * max(1.0, max_norm(X)):
            raise NonCyclicError(f"the family does not generate the eigenspace of point {p}")
        # (P x_i, x_j) = x_j^* P x_i = (B^* B)[j, i]
        weights.append((B.conj().T @ B).T)
    return JointMatrixMeasure(E.x, E.phi, np.stack(weights), tol)


@dataclass(frozen=True, eq=False)
class ModelUnitary:
    """The map ``V : L^2(M) -> C^n`` and its residual report."""

    V: np.ndarray
    model: L2Model
    measure: JointMatrixMeasure
    spectral: JointSpectralMeasure
    residuals: dict

    def max_residual(self) -> float:
        return max(self.residuals.values())


def model_unitary(A: SUSet, F: CyclicFamily, tol: Tolerances = DEFAULT_TOL) -> ModelUnitary:
    """Build ``V`` from ``chi_{u_p} e_s -> P_p x_s`` and measure how well it works.

    Residual keys: ``gram`` (inner products preserved on the spanning set),
    ``unitary_left`` (``V^*V - I``), ``unitary_right`` (``VV^* - I``),
    ``S`` (``V^{-1} S_j V - X_j``), ``U`` (``V^{-1} U_k V - W_k``) and
    ``basis`` (``V e_s - x_s``).  All are max-entry norms.
    """
    if F.vectors.shape[0] != A.n:
        raise ValueError("family vectors do not live in the operators' space")
    if not cyclicity_check(A, F, tol):
        raise NonCyclicError("the family is not cyclic for the SU-set")
    E = joint_spectral_decomposition(A, tol)
    M = extract_matrix_measure(E, F, tol)
    model = L2Model.from_measure(M, tol)
    if model.dim != A.n:
        raise NonCyclicError(f"L^2(M) has dimension {model.dim}, the space has dimension {A.n}")
    X = F.vectors
    blocks = []
    gram = 0.0
    for Q, C in zip(E.bases, model.factors):
        PX = Q @ (Q.conj().T @ X)
        # block p coordinates of chi_p e_s are row s of C_p
        Vp = PX @ pinv(C.T, tol)
        gram = max(gram, max_norm(Vp @ C.T - PX))
        blocks.append(Vp)
    V = np.concatenate(blocks, axis=1)
    scale = max(1.0, max_norm(X))
    if gram > tol.residual_eps * scale:
        raise WellDefinednessError(f"V is not well defined on the spanning set (residual {gram:.3g})")
    I = np.eye(A.n)
    res = {
        "gram": gram,
        "unitary_left": max_norm(V.conj().T @ V - I),
        "unitary_right": max_norm(V @ V.conj().T - I),
        "S": max((max_norm(solve(V, S @ V) - multiplication_matrix_X(model, j)) for j, S in enumerate(A.S)),
                 default=0.0),
        "U": max((max_norm(solve(V, U @ V) - multiplication_matrix_W(model, k)) for k, U in enumerate(A.U)),
                 default=0.0),
        "basis": max(max_norm(V @ model.constant_vector(s) - X[:, s]) for s in range(F.N)),
    }
    return ModelUnitary(V, model, M, E, res)


def product_spectral_measure(A: SUSet, F: CyclicFamily, tol: Tolerances = DEFAULT_TOL) -> StripAtomicMeasure:
    """``((E x F)(.) x_0, x_0)`` from the separate spectral measures of ``S`` and ``U``.

    Needs order ``(1, 1)`` and a single vector.  Each rectangle atom
    ``{a} x {b}`` gets mass ``(E({a}) F({b}) x_0, x_0)``; atoms with mass
    below ``rank_eps * |x_0|^2`` are dropped.
    """
    if A.order != (1, 1) or F.N != 1:
        raise ValueError("product measure needs order (1, 1) and one vector")
    ES = joint_spectral_decomposition(SUSet((A.S[0],), (), A.tol), tol)
    FU = joint_spectral_decomposition(SUSet((), (A.U[0],), A.tol), tol)
    x0 = F.vectors[:, 0]
    floor = tol.rank_eps * float(np.vdot(x0, x0).real)
    atoms = []
    for a, Pa in enumerate(ES.projections):
        for b, Pb in enumerate(FU.projections):
            mass = float(np.vdot(x0, Pa @ Pb @ x0).real)
            if mass > floor:
                atoms.append((ES.x[a, 0], FU.phi[b, 0], mass))
    return StripAtomicMeasure.from_atoms(atoms, A.tol)


def _jittered_grid(rng, K, lo, hi):
    h = (hi - lo) / K
    return lo + h * (np.arange(K) + 0.5) + rng.uniform(-0.3 * h, 0.3 * h, K)


def random_su_set(n: int, order=(1, 0), seed: int = 0, multiplicity: int | None = None,
                  tol: Tolerances = DEFAULT_TOL) -> tuple[SUSet, CyclicFamily]:
    """Random commuting SU-set with a minimal cyclic family.

    Joint spectral tuples are drawn from jittered grids (real coordinates in
    ``[-2, 2]``, angles in ``[-pi, pi)``) and deliberately repeated to make
    the spectral multiplicity equal ``multiplicity`` (drawn from ``1..3``
    when not given).  The spectra are conjugated by a Haar unitary.
    """
    r, l = (int(v) for v in order)
    if n < 1:
        raise ValueError("n must be >= 1")
    if r < 0 or l < 0 or r + l < 1:
        raise ValueError("order must satisfy r, l >= 0 and r + l >= 1")
    rng = np.random.default_rng(seed)
    d = int(multiplicity) if multiplicity is not None else int(rng.integers(1, min(3, n) + 1))
    if not 1 <= d <= n:
        raise ValueError(f"multiplicity must lie in 1..{n}")
    sizes = [d]
    rest = n - d
    while rest:
        b = int(rng.integers(1, min(d, rest) + 1))
        sizes.append(b)
        rest -= b
    K = len(sizes)
    pools_x = [_jittered_grid(rng, K, -2.0, 2.0) for _ in range(r)]
    pools_phi = [_jittered_grid(rng, K, -np.pi, np.pi) for _ in range(l)]
    codes = rng.choice(K ** (r + l), size=K, replace=False)
    digits = [(codes // K ** c) % K for c in range(r + l)]
    xs = np.stack([pools_x[j][digits[j]] for j in range(r)], axis=1) if r else np.zeros((K, 0))
    phis = np.stack([pools_phi[k][digits[r + k]] for k in range(l)], axis=1) if l else np.zeros((K, 0))
    rows = np.repeat(np.arange(K), sizes)
    Q = unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(1j * rng.uniform(-np.pi, np.pi)) * np.ones((1, 1))
    S = tuple(hermitian_part(Q @ np.diag(xs[rows, j]) @ Q.conj().T) for j in range(r))
    U = tuple(Q @ np.diag(np.exp(1j * phis[rows, k])) @ Q.conj().T for k in range(l))
    A = SUSet(S, U, tol)
    for _ in range(20):
        G = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        F = CyclicFamily(G / np.linalg.norm(G, axis=0))
        if cyclicity_check(A, F, tol):
            return A, F
    raise RuntimeError("failed to draw a cyclic family")  # pragma: no cover
