"""Vector-valued polynomials and power-trigonometric polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True, eq=False)
class VectorPolynomial:
    """``p(x) = (p_0(x), ..., p_{N-1}(x))`` with complex coefficients.

    ``coeffs[s, k]`` is the coefficient of ``x**k`` in component ``s``.
    Trailing zero columns are stripped on construction.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.ndim == 1:
            c = c[None, :]
        if c.ndim != 2 or c.shape[0] < 1:
            raise DimensionError(f"coefficients must be (N, deg+1), got shape {c.shape}")
        nz = np.flatnonzero(np.any(c != 0, axis=0))
        c = c[:, : nz[-1] + 1] if nz.size else c[:, :0]
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, N: int) -> "VectorPolynomial":
        return cls(np.zeros((N, 0)))

    @classmethod
    def monomial(cls, N: int, k: int, s: int, coeff=1.0) -> "VectorPolynomial":
        """``coeff * x**k * e_s``."""
        c = np.zeros((N, k + 1), dtype=np.complex128)
        c[s, k] = coeff
        return cls(c)

    @classmethod
    def from_components(cls, components) -> "VectorPolynomial":
        """Build from a list of per-component coefficient lists."""
        components = [np.atleast_1d(np.asarray(c, dtype=np.complex128)) for c in components]
        width = max((c.size for c in components), default=0)
        out = np.zeros((len(components), width), dtype=np.complex128)
        for s, c in enumerate(components):
            out[s, : c.size] = c
        return cls(out)

    @property
    def N(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> float:
        """Highest power present; ``-inf`` for the zero polynomial."""
        return self.coeffs.shape[1] - 1 if self.coeffs.shape[1] else float("-inf")

    def _padded(self, width):
        out = np.zeros((self.N, width), dtype=np.complex128)
        out[:, : self.coeffs.shape[1]] = self.coeffs
        return out

    def __add__(self, other):
        if not isinstance(other, VectorPolynomial):
            return NotImplemented
        if other.N != self.N:
            raise DimensionError(f"cannot add polynomials of sizes {self.N} and {other.N}")
        w = max(self.coeffs.shape[1], other.coeffs.shape[1])
        return VectorPolynomial(self._padded(w) + other._padded(w))

    def __neg__(self):
        return VectorPolynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, alpha):
        if not isinstance(alpha, Number):
            return NotImplemented
        return VectorPolynomial(self.coeffs * alpha)

    __rmul__ = __mul__

    def times_x(self, power: int = 1) -> "VectorPolynomial":
        return VectorPolynomial(np.concatenate([np.zeros((self.N, power)), self.coeffs], axis=1))

    def __eq__(self, other):
        if not isinstance(other, VectorPolynomial):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and np.array_equal(self.coeffs, other.coeffs)

    def __call__(self, t):
        return eval_vector(self, t)


def eval_vector(p: VectorPolynomial, t) -> np.ndarray:
    """Evaluate ``p`` at real ``t`` by Horner's rule (row vector of length N).

    ``t`` may also be a 1-D array, giving an array of shape ``(len(t), N)``.
    """
    t = np.asarray(t, dtype=float)
    acc = np.zeros(t.shape + (p.N,), dtype=np.complex128)
    for k in range(p.coeffs.shape[1] - 1, -1, -1):
        acc = acc * t[..., None] + p.coeffs[:, k]
    return acc


@dataclass(frozen=True, eq=False)
class PowerTrigPolynomial:
    """``sum alpha[m, n] x**m exp(i n phi)`` over finitely many ``(m, n)``."""

    terms: dict

    def __post_init__(self):
        clean = {}
        for (m, n), a in dict(self.terms).items():
            m, n = int(m), int(n)
            if m < 0:
                raise ValueError(f"power of x must be nonnegative, got {m}")
            a = complex(a)
            if a != 0:
                clean[(m, n)] = clean.get((m, n), 0) + a
        object.__setattr__(self, "terms", {k: v for k, v in sorted(clean.items()) if v != 0})

    @classmethod
    def monomial(cls, m: int, n: int, coeff=1.0) -> "PowerTrigPolynomial":
        return cls({(m, n): coeff})

    def __add__(self, other):
        if not isinstance(other, PowerTrigPolynomial):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return PowerTrigPolynomial(out)

    def __neg__(self):
        return PowerTrigPolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, alpha):
        if not isinstance(alpha, Number):
            return NotImplemented
        return PowerTrigPolynomial({k: v * alpha for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PowerTrigPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __call__(self, x, phi):
        return eval_strip(self, x, phi)


def eval_strip(p: PowerTrigPolynomial, x, phi):
    """Evaluate at ``(x, phi)``; arrays broadcast.  Uses ``0**0 = 1``."""
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=float)
    out = np.zeros(np.broadcast(x, phi).shape, dtype=np.complex128)
    for (m, n), a in p.terms.items():
        # numpy already gives 0.0**0 == 1.0
        out = out + a * x**m * np.exp(1j * n * phi)
    return out[()] if out.ndim == 0 else out


def monomial_family_vector(N: int, max_degree: int) -> list[VectorPolynomial]:
    """``x**k e_s`` for ``k <= max_degree``, ordered by the flat index ``k*N + s``."""
    return [VectorPolynomial.monomial(N, k, s) for k in range(max_degree + 1) for s in range(N)]


def monomial_family_strip(m_max: int, n_max: int) -> list[PowerTrigPolynomial]:
    """``x**m exp(i n phi)`` for ``m <= m_max``, ``|n| <= n_max`` in (m, n) order."""
    return [PowerTrigPolynomial.monomial(m, n) for m, n in strip_indices(m_max, n_max)]


def strip_indices(m_max: int, n_max: int) -> list[tuple[int, int]]:
    return [(m, n) for m in range(m_max + 1) for n in range(-n_max, n_max + 1)]
