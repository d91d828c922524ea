"""Command-line front end.

Usage::

    momentmodel moments   --input measure.json [--window N | --mmax M --nmax N]
    momentmodel density   --input measure.json
    momentmodel model-verify (--input suset.json | --seed S --dim n --order r,l)
    momentmodel canonical --input measure.json [--lambda 2i ...] [--window N | --mmax M --nmax N]
    momentmodel generate  --kind {matrix,strip,su_set} --seed S [...]

Every command writes one JSON document.  Exit codes: 0 success, 2 parse /
argument error, 3 invalid measure, 4 invalid or non-commuting SU-set,
5 non-cyclic family, 6 residual or canonicality check failed, 10 polynomials
not dense.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (DomainError, InvalidMeasureError, InvalidSUSetError, NonCyclicError, PositivityError,
                     WellDefinednessError, WindowError)
from .generators import random_matrix_measure, random_strip_measure
from .jsonio import ParseError, dumps, from_json, loads, to_json
from .kernel import DEFAULT_TOL, Tolerances
from .l2space import density_test
from .measures import MatrixAtomicMeasure, StripAtomicMeasure
from .moments import matrix_moments, strip_moments
from .resolvents import DEFAULT_LAMBDAS, check_lambda, verify_canonical_hamburger, verify_canonical_strip
from .spectral import model_unitary, random_su_set, spectral_multiplicity

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID_MEASURE = 3
EXIT_INVALID_SUSET = 4
EXIT_NOT_CYCLIC = 5
EXIT_CHECK_FAILED = 6
EXIT_NOT_DENSE = 10


class CommandError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def parse_lambda(text: str) -> complex:
    """Parse ``"a+bi"`` (``i`` or ``j`` as the imaginary unit)."""
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _tolerances(args) -> Tolerances:
    kw = {}
    for flag, name in (("tol_psd", "psd_eps"), ("tol_rank", "rank_eps"), ("tol_res", "residual_eps"),
                       ("tol_cluster", "cluster_eps")):
        v = getattr(args, flag, None)
        if v is not None:
            kw[name] = v
    try:
        return Tolerances(**{**DEFAULT_TOL.__dict__, **kw})
    except ValueError as exc:
        raise CommandError(EXIT_PARSE, str(exc)) from exc


def _load(path: Path, tol: Tolerances):
    try:
        text = path.read_text()
    except OSError as exc:
        raise CommandError(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    try:
        return from_json(loads(text), tol)
    except ParseError as exc:
        raise CommandError(EXIT_PARSE, str(exc)) from exc
    except InvalidMeasureError as exc:
        raise CommandError(EXIT_INVALID_MEASURE, str(exc)) from exc
    except InvalidSUSetError as exc:
        raise CommandError(EXIT_INVALID_SUSET, str(exc)) from exc


def _load_measure(path, tol):
    obj = _load(path, tol)
    if not isinstance(obj, (MatrixAtomicMeasure, StripAtomicMeasure)):
        raise CommandError(EXIT_PARSE, "input is not a matrix_atomic or strip_atomic measure")
    return obj


def _window(v, what):
    if v is not None and v < 0:
        raise CommandError(EXIT_PARSE, f"{what} must be nonnegative")
    return v


def cmd_moments(args, path, tol):
    mu = _load_measure(path, tol)
    if isinstance(mu, MatrixAtomicMeasure):
        n = _window(args.window, "--window")
        return to_json(matrix_moments(mu, 2 * mu.n_atoms if n is None else n)), EXIT_OK
    mm = _window(args.mmax, "--mmax")
    nm = _window(args.nmax, "--nmax")
    K = mu.n_atoms
    return to_json(strip_moments(mu, 2 * K if mm is None else mm, 2 * K if nm is None else nm)), EXIT_OK


def cmd_density(args, path, tol):
    rep = density_test(_load_measure(path, tol), tol)
    return rep.to_dict(), EXIT_OK if rep.dense else EXIT_NOT_DENSE


def _lambdas(args):
    lams = args.lam or list(DEFAULT_LAMBDAS)
    try:
        return [check_lambda(z) for z in lams]
    except DomainError as exc:
        raise CommandError(EXIT_PARSE, str(exc)) from exc


def cmd_canonical(args, path, tol):
    mu = _load_measure(path, tol)
    lams = _lambdas(args)
    try:
        if isinstance(mu, MatrixAtomicMeasure):
            rep = verify_canonical_hamburger(mu, lams, _window(args.window, "--window"), tol)
            out = rep.to_dict()
        else:
            window = None
            if args.mmax is not None or args.nmax is not None:
                K = mu.n_atoms
                window = (_window(args.mmax, "--mmax") if args.mmax is not None else K,
                          _window(args.nmax, "--nmax") if args.nmax is not None else K)
            rep = verify_canonical_strip(mu, lams, window, tol)
            out = rep.to_dict()
    except (WindowError, PositivityError) as exc:
        raise CommandError(EXIT_PARSE, str(exc)) from exc
    return out, EXIT_OK if rep.canonical else EXIT_CHECK_FAILED


def _parse_order(text):
    try:
        r, l = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must look like 'r,l', got {text!r}") from None
    return r, l


def cmd_model_verify(args, path, tol):
    if path is not None:
        A, F = _load(path, tol)
        if F is None:
            raise CommandError(EXIT_PARSE, "su_set input needs a 'family' for model-verify")
    else:
        if args.seed is None:
            raise CommandError(EXIT_PARSE, "model-verify needs --input or --seed")
        try:
            A, F = random_su_set(args.dim, args.order, args.seed, args.multiplicity, tol)
        except ValueError as exc:
            raise CommandError(EXIT_PARSE, str(exc)) from exc
    if F.vectors.shape[0] != A.n:
        raise CommandError(EXIT_PARSE, f"family vectors must have length {A.n}")
    try:
        mu = model_unitary(A, F, tol)
    except NonCyclicError as exc:
        raise CommandError(EXIT_NOT_CYCLIC, str(exc)) from exc
    except WellDefinednessError as exc:
        raise CommandError(EXIT_CHECK_FAILED, str(exc)) from exc
    worst = mu.max_residual()
    ok = worst <= tol.residual_eps
    out = {
        "n": A.n,
        "order": list(A.order),
        "N": F.N,
        "multiplicity": spectral_multiplicity(A, tol),
        "atoms": mu.measure.n_atoms,
        "residuals": {k: float(v) for k, v in mu.residuals.items()},
        "max_residual": float(worst),
        "ok": ok,
    }
    return out, EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_generate(args, path, tol):
    if args.seed is None:
        raise CommandError(EXIT_PARSE, "generate needs --seed")
    try:
        if args.kind == "matrix":
            return to_json(random_matrix_measure(args.seed, args.atoms, args.N, tol=tol)), EXIT_OK
        if args.kind == "strip":
            return to_json(random_strip_measure(args.seed, args.atoms, tol=tol)), EXIT_OK
        return to_json(random_su_set(args.dim, args.order, args.seed, args.multiplicity, tol)), EXIT_OK
    except ValueError as exc:
        raise CommandError(EXIT_PARSE, str(exc)) from exc


COMMANDS = {
    "moments": cmd_moments,
    "density": cmd_density,
    "model-verify": cmd_model_verify,
    "canonical": cmd_canonical,
    "generate": cmd_generate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="input JSON file")
    common.add_argument("--output", type=Path, help="output file (default: stdout)")
    common.add_argument("--batch", type=Path, help="run on every *.json file in this directory")
    common.add_argument("--tol-psd", type=float)
    common.add_argument("--tol-rank", type=float)
    common.add_argument("--tol-res", type=float)
    common.add_argument("--tol-cluster", type=float)
    common.add_argument("--window", type=int, help="moment order (matrix measures)")
    common.add_argument("--mmax", type=int, help="power window (strip measures)")
    common.add_argument("--nmax", type=int, help="frequency window (strip measures)")
    common.add_argument("--lambda", dest="lam", action="append", type=parse_lambda,
                        help="spectral parameter 'a+bi' (repeatable)")
    common.add_argument("--seed", type=int)
    common.add_argument("--dim", type=int, default=6, help="space dimension for generated SU-sets")
    common.add_argument("--order", type=_parse_order, default=(1, 1), help="'r,l' for generated SU-sets")
    common.add_argument("--multiplicity", type=int)
    common.add_argument("--kind", choices=["matrix", "strip", "su_set"], default="matrix")
    common.add_argument("--atoms", type=int)
    common.add_argument("-N", type=int, dest="N", help="matrix size for generated measures")

    parser = argparse.ArgumentParser(prog="momentmodel", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _run_one(args, path, tol):
    try:
        return COMMANDS[args.command](args, path, tol)
    except CommandError as exc:
        return {"error": str(exc), "exit_code": exc.code}, exc.code


def run(argv=None) -> tuple[str, int, Path | None]:
    """Parse ``argv`` and run; returns ``(json_text, exit_code, output_path)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return "", EXIT_PARSE if exc.code else EXIT_OK, None
    out_path = args.output
    try:
        tol = _tolerances(args)
    except CommandError as exc:
        return dumps({"error": str(exc), "exit_code": exc.code}), exc.code, out_path
    if args.batch is not None:
        if not args.batch.is_dir():
            msg = {"error": f"{args.batch} is not a directory", "exit_code": EXIT_PARSE}
            return dumps(msg), EXIT_PARSE, out_path
        results, code = {}, EXIT_OK
        for f in sorted(args.batch.glob("*.json")):
            out, c = _run_one(args, f, tol)
            results[f.name] = out
            if c and not code:
                code = c
        return dumps(results), code, out_path
    if args.command not in ("generate", "model-verify") and args.input is None:
        msg = {"error": f"{args.command} needs --input", "exit_code": EXIT_PARSE}
        return dumps(msg), EXIT_PARSE, out_path
    out, code = _run_one(args, args.input, tol)
    return dumps(out), code, out_path


def main(argv=None) -> int:
    text, code, out_path = run(argv)
    if text:
        if out_path is not None:
            out_path.write_text(text)
        else:
            sys.stdout.write(text)
        if code:
            err = loads(text).get("error")
            if err:
                print(f"momentmodel: {err}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
