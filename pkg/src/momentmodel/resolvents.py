"""Resolvent criteria for canonical solutions.

For an atomic measure the Gram data of the GNS space determine the matrix
of every candidate resolvent ``D_lambda`` from its integral entries.  The
checks below transport those entries onto the GNS embedding by least
squares and test the operator identities a resolvent of a self-adjoint
extension must satisfy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DomainError, WindowError
from .gns import (GnsSpace, build_gns_hamburger, build_gns_strip, hamburger_model_map, hamburger_shift_residual,
                  multiplication_image, strip_model_map, strip_shift_residual)
from .kernel import DEFAULT_TOL, Tolerances, condition_number, max_norm, pinv
from .measures import MatrixAtomicMeasure, StripAtomicMeasure, l2_dimension
from .moments import matrix_moments, strip_moments
from .polynomials import strip_indices

DEFAULT_LAMBDAS = (1j, 2j, 1 + 1j)
MAX_CONDITION = 1e12


def check_lambda(lam) -> complex:
    lam = complex(lam)
    if not np.isfinite(lam.real) or not np.isfinite(lam.imag):
        raise DomainError(f"lambda must be finite, got {lam}")
    if lam.imag <= 0:
        raise DomainError(f"lambda must lie in the open upper half-plane, got {lam}")
    return lam


def resolvent_entries_hamburger(M: MatrixAtomicMeasure, lam, n: int) -> np.ndarray:
    """Entry ``((k, r), (l, s))`` is ``sum_j t_j^{k+l} / (t_j - lam) (W_j)_{rs}``."""
    lam = check_lambda(lam)
    if n < 0:
        raise WindowError("window must be nonnegative")
    P = (n + 1) * M.N
    R = np.zeros((P, P), dtype=np.complex128)
    k = np.arange(n + 1)
    for t, W in zip(M.positions, M.weights):
        v = t ** k
        R += np.kron(np.outer(v, v), W) / (t - lam)
    return R


def resolvent_entries_strip(sigma: StripAtomicMeasure, lam, window) -> np.ndarray:
    """Entry ``((m, n), (m', n'))`` is ``sum_j x^{m+m'} e^{i(n-n')phi} / (x - lam) w``."""
    lam = check_lambda(lam)
    mw, nw = (int(v) for v in window)
    if mw < 0 or nw < 0:
        raise WindowError("window must be nonnegative")
    idx = np.array(strip_indices(mw, nw))
    R = np.zeros((len(idx), len(idx)), dtype=np.complex128)
    for x, phi, w in zip(sigma.x, sigma.phi, sigma.w):
        a = x ** idx[:, 0] * np.exp(1j * idx[:, 1] * phi)
        R += np.outer(a, a.conj()) * (w / (x - lam))
    return R


def transport(space: GnsSpace, entries: np.ndarray) -> tuple[np.ndarray, float]:
    """Operator ``D`` on the GNS space with ``<D v_p, v_q> = entries[p, q]``.

    Returns ``D`` and the relative residual ``max |V^* D V - entries^T|``.
    """
    V = space.vectors
    Vp = pinv(V)
    D = Vp.conj().T @ entries.T @ Vp
    resid = max_norm(V.conj().T @ D @ V - entries.T) / max(1.0, max_norm(entries))
    return D, resid


@dataclass
class CanonicalReport:
    canonical: bool
    max_residual: float
    lambda_set: list
    flags: list
    residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "canonical": self.canonical,
            "max_residual": self.max_residual,
            "lambda_set": [{"re": lam.real, "im": lam.imag} for lam in self.lambda_set],
            "flags": list(self.flags),
            "residuals": dict(self.residuals),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CanonicalReport":
        return cls(bool(d["canonical"]), float(d["max_residual"]),
                   [complex(z["re"], z["im"]) for z in d["lambda_set"]], list(d["flags"]),
                   {k: float(v) for k, v in d.get("residuals", {}).items()})


def _rel(A, B) -> float:
    return max_norm(A - B) / max(1.0, max_norm(B))


def _resolvent_suite(space, entries_of, lambdas, A_hat, tol, flags):
    """Checks shared by both moment problems; returns residuals and the ``D`` matrices."""
    res = {"transport": 0.0}
    D, T = {}, {}
    dim = space.dim
    for lam in lambdas:
        Dl, r = transport(space, entries_of(lam))
        res["transport"] = max(res["transport"], r)
        D[lam] = Dl
        if dim and condition_number(Dl) > MAX_CONDITION:
            flags.append(f"non_invertible:{lam}")
            continue
        T[lam] = np.linalg.inv(Dl) + lam * np.eye(dim)

    res["lambda_independence"] = max((_rel(T[a], T[b]) for a, b in combinations(T, 2)), default=0.0)
    res["hermitian"] = max((max_norm(t - t.conj().T) / max(1.0, max_norm(t)) for t in T.values()), default=0.0)
    res["multiplication"] = max((_rel(t, A_hat) for t in T.values()), default=0.0)
    res["resolvent_identity"] = max(
        (max_norm(D[a] - D[b] - (a - b) * D[a] @ D[b]) / max(1.0, max_norm(D[a]), max_norm(D[b]))
         for a, b in combinations(D, 2)), default=0.0)
    return res, D, T


def _finish(res, lambdas, flags, tol) -> CanonicalReport:
    res = {k: float(v) for k, v in res.items()}
    worst = max(res.values(), default=0.0)
    canonical = not flags and worst <= tol.residual_eps
    return CanonicalReport(canonical, worst, list(lambdas), flags, res)


def verify_canonical_hamburger(M: MatrixAtomicMeasure, lambdas=DEFAULT_LAMBDAS, window: int | None = None,
                               tol: Tolerances = DEFAULT_TOL) -> CanonicalReport:
    """Check that ``D_lambda^{-1} + lambda`` is one self-adjoint extension of the shift.

    ``window`` is the Hankel order ``n`` (vectors ``x_0 .. x_{(n+1)N-1}``);
    it defaults to the number of atoms, which is enough for the shift's
    domain to span the GNS space.
    """
    lambdas = [check_lambda(lam) for lam in lambdas]
    if not lambdas:
        raise DomainError("need at least one lambda")
    n = M.n_atoms if window is None else int(window)
    if n < 0:
        raise WindowError("window must be nonnegative")
    flags: list[str] = []
    space = build_gns_hamburger(matrix_moments(M, 2 * n), n, tol)
    if space.dim < l2_dimension(M, tol):
        flags.append("window_below_saturation")
    mm = hamburger_model_map(space, M, M.N, tol)
    A_hat = multiplication_image(mm)
    res, D, T = _resolvent_suite(space, lambda lam: resolvent_entries_hamburger(M, lam, n), lambdas,
                                 A_hat, tol, flags)
    res["shift"] = hamburger_shift_residual(space, A_hat, M.N)
    res["model_map"] = max(mm.residuals.values())
    return _finish(res, lambdas, flags, tol)


@dataclass
class CayleyReport:
    max_deviation: float
    inverse_residual: float
    unimodularity: float
    k_range: list
    n_range: list


def _strip_window(sigma: StripAtomicMeasure, window, n_needed=0):
    if window is None:
        K = max(sigma.n_atoms, 1)
        return K, max(K, n_needed)
    mw, nw = (int(v) for v in window)
    return mw, nw


def cayley_power_check(sigma: StripAtomicMeasure, k_range=range(-3, 4), n_range=range(-3, 4), window=None,
                       tol: Tolerances = DEFAULT_TOL, strip=None) -> CayleyReport:
    """Compare ``<C^k x_{0,n}, x_{0,0}>`` with ``sum ((x+i)/(x-i))^k e^{in phi} w``.

    ``C = I + 2i D_i`` is built from the transported resolvent at ``i``;
    negative powers use an explicit inverse of ``C``.
    """
    k_range, n_range = list(k_range), list(n_range)
    need = max((abs(n) for n in n_range), default=0)
    mw, nw = _strip_window(sigma, window, need)
    if need > nw:
        raise WindowError(f"window n_max={nw} cannot represent x_(0,{need})")
    if strip is None:
        strip = build_gns_strip(strip_moments(sigma, 2 * mw, 2 * nw), (mw, nw), tol)
    space = strip.space
    D_i, _ = transport(space, resolvent_entries_strip(sigma, 1j, (mw, nw)))
    I = np.eye(space.dim)
    C = I + 2j * D_i
    C_inv = np.linalg.inv(C)
    cay = (sigma.x + 1j) / (sigma.x - 1j)
    v00 = space.vector((0, 0))
    worst = 0.0
    for k in k_range:
        Ck = np.linalg.matrix_power(C if k >= 0 else C_inv, abs(k))
        for n in n_range:
            lhs = np.vdot(v00, Ck @ space.vector((0, n)))
            rhs = np.sum(cay ** k * np.exp(1j * n * sigma.phi) * sigma.w)
            worst = max(worst, abs(lhs - rhs))
    return CayleyReport(float(worst / max(1.0, sigma.total_mass)), float(max_norm(C @ C_inv - I)),
                        float(np.max(np.abs(np.abs(cay) - 1.0))), k_range, n_range)


def verify_canonical_strip(sigma: StripAtomicMeasure, lambdas=DEFAULT_LAMBDAS, window=None,
                           tol: Tolerances = DEFAULT_TOL) -> CanonicalReport:
    """Strip analogue of :func:`verify_canonical_hamburger`.

    Also checks that ``D_lambda`` commutes with ``B0``, the structural
    residuals of ``A0``, ``B0``, ``J0``, the shift identity for powers of
    the multiplication operator, and the Cayley power identity for
    ``|k| <= 3`` and ``|n| <= min(3, n_w)``.
    """
    lambdas = [check_lambda(lam) for lam in lambdas]
    if not lambdas:
        raise DomainError("need at least one lambda")
    # the default frequency cap of at least 3 lets the Cayley check reach |n| <= 3
    mw, nw = _strip_window(sigma, window, 3 if window is None else 0)
    flags: list[str] = []
    strip = build_gns_strip(strip_moments(sigma, 2 * mw, 2 * nw), (mw, nw), tol)
    space = strip.space
    if space.dim < sigma.n_atoms:
        flags.append("window_below_saturation")
    mm = strip_model_map(strip, sigma, tol)
    A_hat = multiplication_image(mm)
    res, D, T = _resolvent_suite(space, lambda lam: resolvent_entries_strip(sigma, lam, (mw, nw)), lambdas,
                                 A_hat, tol, flags)
    B = strip.B0.matrix
    res["B_commutation"] = max(max_norm(Dl @ B - B @ Dl) / max(1.0, max_norm(Dl)) for Dl in D.values())
    res["shift"] = strip_shift_residual(strip, A_hat)
    res["model_map"] = max(mm.residuals.values())
    res.update(strip.residuals)
    nc = min(3, nw)
    cay = cayley_power_check(sigma, range(-3, 4), range(-nc, nc + 1), (mw, nw), tol, strip=strip)
    res["cayley"] = cay.max_deviation
    return _finish(res, lambdas, flags, tol)
