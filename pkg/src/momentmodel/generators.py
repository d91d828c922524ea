"""Seeded random instances for tests, acceptance runs and the CLI."""
from __future__ import annotations

import numpy as np

from .kernel import DEFAULT_TOL, Tolerances
from .measures import MatrixAtomicMeasure, StripAtomicMeasure
from .spectral import random_su_set  # noqa: F401  (re-exported)


def _jittered(rng, K, lo, hi):
    # well separated nodes keep Hankel / Vandermonde conditioning moderate
    h = (hi - lo) / K
    return lo + h * (np.arange(K) + 0.5) + rng.uniform(-0.3 * h, 0.3 * h, K)


def random_psd(rng, N, rank=None):
    r = int(rng.integers(1, N + 1)) if rank is None else rank
    C = rng.standard_normal((N, r)) + 1j * rng.standard_normal((N, r))
    W = C @ C.conj().T / r
    return 0.5 * (W + W.conj().T)


def random_matrix_measure(seed, K: int | None = None, N: int | None = None, full_rank: bool = False,
                          tol: Tolerances = DEFAULT_TOL) -> MatrixAtomicMeasure:
    """``K <= 6`` atoms on ``[-1.5, 1.5]`` with random PSD weights (``N <= 4``).

    Weight ranks are random unless ``full_rank``.
    """
    rng = np.random.default_rng(seed)
    K = int(rng.integers(1, 7)) if K is None else K
    N = int(rng.integers(1, 5)) if N is None else N
    t = _jittered(rng, K, -1.5, 1.5)
    W = np.stack([random_psd(rng, N, N if full_rank else None) for _ in range(K)])
    return MatrixAtomicMeasure(t, W, tol)


def random_strip_measure(seed, K: int | None = None, tol: Tolerances = DEFAULT_TOL) -> StripAtomicMeasure:
    """``K <= 6`` atoms; positions and angles come from separated pools and
    may repeat individually (never as pairs)."""
    rng = np.random.default_rng(seed)
    K = int(rng.integers(1, 7)) if K is None else K
    xs = _jittered(rng, K, -1.5, 1.5)
    ph = _jittered(rng, K, -np.pi, np.pi)
    codes = rng.choice(K * K, size=K, replace=False)
    return StripAtomicMeasure(xs[codes // K], ph[codes % K], rng.uniform(0.2, 1.5, K), tol)
