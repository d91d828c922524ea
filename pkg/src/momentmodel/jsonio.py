"""JSON encoding of measures, SU-sets, moment tables and reports.

Complex scalars are ``{"re": float, "im": float}``; matrices are lists of
rows.  Floats are written with Python's shortest round-trip ``repr``.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import InvalidMeasureError, MomentModelError
from .kernel import DEFAULT_TOL, Tolerances
from .measures import MatrixAtomicMeasure, StripAtomicMeasure
from .moments import MatrixMomentSequence, StripMomentTable
from .spectral import CyclicFamily, SUSet


class ParseError(MomentModelError, ValueError):
    """Input is not well-formed JSON of the expected shape."""


def encode_complex(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def decode_complex(d) -> complex:
    if isinstance(d, bool):
        raise ParseError(f"expected a number, got {d!r}")
    if isinstance(d, (int, float)):
        return complex(d)
    if isinstance(d, dict) and set(d) <= {"re", "im"} and "re" in d:
        re, im = d["re"], d.get("im", 0.0)
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            raise ParseError(f"complex parts must be numbers: {d!r}")
        return complex(re, im)
    raise ParseError(f"not a complex scalar: {d!r}")


def encode_matrix(A) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(A)]


def decode_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("a matrix must be a nonempty list of rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError("matrix rows have different lengths")
    return np.array([[decode_complex(z) for z in r] for r in rows], dtype=np.complex128)


def decode_vector(items) -> np.ndarray:
    if not isinstance(items, list):
        raise ParseError("a vector must be a list")
    return np.array([decode_complex(z) for z in items], dtype=np.complex128)


def _real(v, what):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{what} must be a real number, got {v!r}")
    return float(v)


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{what} must be an integer, got {v!r}")
    return v


def to_json(obj) -> dict:
    """Encode a measure, SU-set (with optional family), or moment object."""
    if isinstance(obj, MatrixAtomicMeasure):
        return {"kind": "matrix_atomic", "N": obj.N,
                "atoms": [{"t": float(t), "W": encode_matrix(W)} for t, W in obj.atoms()]}
    if isinstance(obj, StripAtomicMeasure):
        return {"kind": "strip_atomic",
                "atoms": [{"x": x, "phi": p, "w": w} for x, p, w in obj.atoms()]}
    if isinstance(obj, MatrixMomentSequence):
        return {"kind": "matrix_moments", "N": obj.N, "n_max": obj.n_max, "S": [encode_matrix(S) for S in obj.S]}
    if isinstance(obj, StripMomentTable):
        return {"kind": "strip_moments", "m_max": obj.m_max, "n_max": obj.n_max,
                "values": [[encode_complex(z) for z in row] for row in obj.values]}
    if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[0], SUSet):
        out = to_json(obj[0])
        if obj[1] is not None:
            out["family"] = [[encode_complex(z) for z in obj[1].vectors[:, i]] for i in range(obj[1].N)]
        return out
    if isinstance(obj, SUSet):
        return {"kind": "su_set", "n": obj.n, "S": [encode_matrix(S) for S in obj.S],
                "U": [encode_matrix(U) for U in obj.U]}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_json(d, tol: Tolerances = DEFAULT_TOL):
    """Decode the output of :func:`to_json`.

    Structural problems raise :class:`ParseError`; well-formed input that
    violates a mathematical invariant raises the constructor's own error.
    SU-sets decode to ``(SUSet, CyclicFamily or None)``.
    """
    if not isinstance(d, dict) or "kind" not in d:
        raise ParseError("expected a JSON object with a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "matrix_atomic":
            atoms = d["atoms"]
            if not isinstance(atoms, list):
                raise ParseError("'atoms' must be a list")
            N = _int(d["N"], "N")
            t = [_real(a["t"], "t") for a in atoms]
            W = [decode_matrix(a["W"]) for a in atoms]
            if any(w.shape != (N, N) for w in W):
                raise InvalidMeasureError(f"every weight must be {N}x{N}")
            return MatrixAtomicMeasure(np.array(t), np.stack(W) if W else np.zeros((0, N, N)), tol)
        if kind == "strip_atomic":
            atoms = d["atoms"]
            if not isinstance(atoms, list):
                raise ParseError("'atoms' must be a list")
            x = [_real(a["x"], "x") for a in atoms]
            phi = [_real(a["phi"], "phi") for a in atoms]
            w = [_real(a["w"], "w") for a in atoms]
            return StripAtomicMeasure(np.array(x), np.array(phi), np.array(w), tol)
        if kind == "matrix_moments":
            return MatrixMomentSequence(np.stack([decode_matrix(S) for S in d["S"]]), tol)
        if kind == "strip_moments":
            rows = d["values"]
            return StripMomentTable(np.array([[decode_complex(z) for z in r] for r in rows]), tol)
        if kind == "su_set":
            S = [decode_matrix(m) for m in d.get("S", [])]
            U = [decode_matrix(m) for m in d.get("U", [])]
            A = SUSet(tuple(S), tuple(U), tol)
            fam = d.get("family")
            F = None
            if fam is not None:
                vecs = [decode_vector(v) for v in fam]
                if not vecs or any(v.shape != (A.n,) for v in vecs):
                    raise ParseError(f"family vectors must be nonempty lists of length {A.n}")
                F = CyclicFamily(np.stack(vecs, axis=1))
            return A, F
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed {kind} object: {exc!r}") from exc
    raise ParseError(f"unknown kind {kind!r}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
