"""Command-line front end: build matrices, compute det/per, run checks and sweeps.

Exit codes: 0 = no failing checks, 1 = at least one fail verdict,
2 = usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import IO, Iterable

from . import detper, matgen, verify
from .matgen import EntryKind, Matrix, NonUnitDenominator
from .modnum import ModCtx, NonUnitError, PRIME

CAUCHY_BY_NAME = {
    "invdiff": EntryKind.INV_DIFF,
    "ratiosumdiff": EntryKind.RATIO_SUM_DIFF,
    "invdiffsquares": EntryKind.INV_DIFF_SQUARES,
    "ratiosumsquares": EntryKind.RATIO_SUM_SQUARES,
}


class InputError(Exception):
    """Bad user input that should terminate with exit code 2."""


# ---------------------------------------------------------------------------
# report serialization


def emit_reports(reports: Iterable[verify.CheckReport], fmt: str, out: IO[str]) -> list[verify.CheckReport]:
    reports = list(reports)
    if fmt == "jsonl":
        for r in reports:
            record = r.as_record()
            record["elapsed_ms"] = round(record["elapsed_ms"], 3)
            out.write(json.dumps(record) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out)
        writer.writerow(["check_id", "params", "computed", "expected", "verdict", "elapsed_ms"])
        for r in reports:
            writer.writerow(
                [r.check_id, json.dumps(r.params), r.computed, r.expected,
                 r.verdict, f"{r.elapsed_ms:.3f}"]
            )
    elif fmt == "tty":
        counts = {verify.PASS: 0, verify.FAIL: 0, verify.INCONCLUSIVE: 0, verify.NOT_APPLICABLE: 0}
        for r in reports:
            counts[r.verdict] += 1
            ptxt = " ".join(f"{k}={v}" for k, v in r.params.items())
            out.write(
                f"[{r.verdict:>14}] {r.check_id} {ptxt}  computed={r.computed or '-'} "
                f"expected={r.expected}  ({r.elapsed_ms:.1f} ms)\n"
            )
        out.write(
            f"{len(reports)} checks: {counts[verify.PASS]} pass, {counts[verify.FAIL]} fail, "
            f"{counts[verify.INCONCLUSIVE]} inconclusive, "
            f"{counts[verify.NOT_APPLICABLE]} not-applicable\n"
        )
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown format {fmt!r}")
    return reports


# ---------------------------------------------------------------------------
# matrix input/output helpers


def _load_matrix(path: str) -> Matrix:
    try:
        if path == "-":
            return matgen.read_matrix(sys.stdin, provenance="stdin")
        with open(path) as fh:
            return matgen.read_matrix(fh, provenance=f"file:{path}")
    except (OSError, ValueError) as e:
        raise InputError(f"cannot read matrix from {path}: {e}") from None


def _write_matrix(matrix: Matrix, path: str | None) -> None:
    if path is None or path == "-":
        matgen.write_matrix(matrix, sys.stdout)
    else:
        with open(path, "w") as fh:
            matgen.write_matrix(matrix, fh)


def _ctx_for_flags(mod: int | None, exact: bool, default_mod: int | None) -> ModCtx | None:
    if exact and mod is not None:
        raise InputError("--mod and --exact are mutually exclusive")
    if exact:
        return None
    m = mod if mod is not None else default_mod
    if m is None:
        raise InputError("either --mod or --exact is required here")
    try:
        return ModCtx.for_modulus(m)
    except ValueError as e:
        raise InputError(str(e)) from None


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_build(args: argparse.Namespace) -> int:
    kind = args.kind
    try:
        if kind == "quadform":
            ctx = _ctx_for_flags(args.mod, args.exact, args.p)
            exponent = args.exp if args.exp is not None else args.p - 2
            matrix = matgen.quad_form_matrix(args.p, args.c, args.d, args.range, exponent, ctx)
        elif kind == "cauchy":
            ctx = _ctx_for_flags(args.mod, False, None)
            size = {"p-1": args.p - 1, "p": args.p, "half": (args.p - 1) // 2}[args.set]
            matrix = matgen.cauchy_type_matrix(CAUCHY_BY_NAME[args.cauchy_kind], size, args.diag, ctx)
        elif kind == "invform":
            matrix = matgen.inverse_form_matrix(args.p, args.which)
        elif kind == "primeind":
            matrix = matgen.prime_indicator_matrix(args.n)
        elif kind == "checkerboard":
            matrix = matgen.random_checkerboard_matrix(args.n, args.seed, symmetric=args.symmetric)
        elif kind == "skewcheckerboard":
            matrix = matgen.random_skew_checkerboard_matrix(args.m, args.seed)
        elif kind == "polyeval":
            try:
                coeffs = json.loads(args.coeffs)
            except json.JSONDecodeError as e:
                raise InputError(f"--coeffs must be a JSON list of lists: {e}") from None
            matrix = matgen.poly_eval_matrix(coeffs, args.n)
        else:  # pragma: no cover - argparse restricts choices
            raise InputError(f"unknown builder {kind!r}")
    except (ValueError, NonUnitError) as e:
        raise InputError(str(e)) from None
    _write_matrix(matrix, args.out)
    return 0


def _resolve_input(args: argparse.Namespace) -> Matrix:
    matrix = _load_matrix(args.matrix)
    if args.mod is not None:
        if matrix.ctx is not None:
            if matrix.ctx.modulus != args.mod:
                raise InputError(
                    f"matrix is mod {matrix.ctx.modulus}; --mod {args.mod} conflicts"
                )
            return matrix
        try:
            ctx = ModCtx.for_modulus(args.mod)
        except ValueError as e:
            raise InputError(str(e)) from None
        rows = [[x % args.mod for x in row] for row in matrix.entries]
        return Matrix(matrix.n, tuple(tuple(r) for r in rows), ctx,
                      matrix.provenance + f"|mod{args.mod}")
    return matrix


def cmd_det(args: argparse.Namespace) -> int:
    matrix = _resolve_input(args)
    engine = args.engine
    if engine == "auto":
        if not detper.checkerboard_violations(matrix):
            engine = "checkerboard"
        elif matrix.ctx is not None and matrix.ctx.kind == PRIME:
            engine = "field"
        else:
            engine = "bareiss"
    try:
        if engine == "field":
            value = detper.det_field(matrix)
        elif engine == "bareiss":
            value = detper.det_exact(matrix, reduce_ctx=matrix.ctx)
        elif engine == "naive":
            value = detper.det_naive(matrix)
        else:
            value = detper.factor_checkerboard(matrix, "det")
    except (ValueError, ArithmeticError) as e:
        raise InputError(str(e)) from None
    print(value)
    print(f"engine: {engine}", file=sys.stderr)
    return 0


def cmd_per(args: argparse.Namespace) -> int:
    matrix = _resolve_input(args)
    engine = args.engine
    if engine == "auto":
        engine = "checkerboard" if not detper.checkerboard_violations(matrix) else "ryser"
    try:
        if engine == "ryser":
            value = detper.per_ryser(matrix, chunks=args.chunks)
        elif engine == "naive":
            value = detper.per_naive(matrix)
        else:
            value = detper.factor_checkerboard(matrix, "per")
    except (ValueError, ArithmeticError) as e:
        raise InputError(str(e)) from None
    print(value)
    print(f"engine: {engine}", file=sys.stderr)
    return 0


def _check_params(args: argparse.Namespace) -> tuple[str, dict]:
    check_id = args.check
    params: dict = {}
    if check_id == "eq15":
        params = {"p": args.p, "c": args.c, "d": args.d}
    elif check_id == "p3":
        params = {"c": args.c, "d": args.d}
    elif check_id in ("reflection", "column-relation"):
        params = {"p": args.p, "c": args.c, "d": args.d}
    elif check_id == "dp-theorem":
        if args.variant is None:
            raise InputError("dp-theorem needs --variant")
        params = {"p": args.p, "variant": args.variant}
        if args.variant == "c_minus1":
            params["c"] = args.c
    elif check_id == "background":
        if args.which is None:
            raise InputError("background needs --which")
        params = {"p": args.p, "which": args.which}
    elif check_id == "conj":
        if args.id is None:
            raise InputError("conj needs --id")
        check_id = f"conj{args.id}"
        if args.id == 1:
            params = {"n": args.n, "c": args.c, "d": args.d}
        else:
            params = {"p": args.p}
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown check {check_id!r}")
    missing = [k for k, v in params.items() if v is None]
    if missing:
        raise InputError(f"{check_id} needs --" + ", --".join(missing))
    return check_id, params


def cmd_check(args: argparse.Namespace) -> int:
    check_id, params = _check_params(args)
    try:
        reports = verify.run_check(check_id, params, per_order_cap=args.per_order_cap)
    except (ValueError, NonUnitDenominator) as e:
        raise InputError(str(e)) from None
    emit_reports(reports, args.format, sys.stdout)
    return verify.exit_code(reports)


def cmd_sweep(args: argparse.Namespace) -> int:
    check_id = args.check
    if check_id == "conj":
        if args.id is None:
            raise InputError("conj needs --id")
        check_id = f"conj{args.id}"
    try:
        cells = verify.sweep_cells(
            check_id,
            pmin=args.pmin,
            pmax=args.pmax,
            nmin=args.nmin,
            nmax=args.nmax,
            cmax=args.cmax,
            dmax=args.dmax,
            variant=args.variant,
            which=args.which,
        )
        reports = verify.run_sweep(cells, jobs=args.jobs, per_order_cap=args.per_order_cap)
    except (ValueError, NonUnitDenominator) as e:
        raise InputError(str(e)) from None
    emit_reports(reports, args.format, sys.stdout)
    return verify.exit_code(reports)


# ---------------------------------------------------------------------------
# argument parsing


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("jsonl", "csv", "tty"), default="tty",
                        help="report format (default: tty)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="congruence-lab",
        description="Exact determinant/permanent workbench for modular congruence checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a matrix and write it in the text format")
    bsub = b.add_subparsers(dest="kind", required=True)

    bq = bsub.add_parser("quadform", help="powers of i^2 + c*i*j + d*j^2 over an index grid")
    bq.add_argument("--p", type=int, required=True, help="grid bound (order p, or p-1 with --range from1)")
    bq.add_argument("--c", type=int, required=True)
    bq.add_argument("--d", type=int, required=True)
    bq.add_argument("--range", choices=("full0", "from1"), default="full0")
    bq.add_argument("--exp", type=int, default=None, help="exponent (default: p-2)")
    bq.add_argument("--mod", type=int, default=None, help="modulus (default: p)")
    bq.add_argument("--exact", action="store_true", help="exact integer entries")
    bq.add_argument("--out", default=None)

    bc = bsub.add_parser("cauchy", help="difference/ratio matrices over indices 1..size")
    bc.add_argument("--kind", dest="cauchy_kind", choices=sorted(CAUCHY_BY_NAME), required=True)
    bc.add_argument("--p", type=int, required=True)
    bc.add_argument("--set", choices=("p-1", "p", "half"), default="p-1",
                    help="index set: 1..p-1, 1..p, or 1..(p-1)/2")
    bc.add_argument("--diag", choices=("zero", "one"), required=True)
    bc.add_argument("--mod", type=int, required=True)
    bc.add_argument("--out", default=None)

    bi = bsub.add_parser("invform", help="inverse quadratic-form matrices mod p")
    bi.add_argument("--p", type=int, required=True)
    bi.add_argument("--which", choices=verify.INVERSE_FORM_WHICH, required=True)
    bi.add_argument("--out", default=None)

    bp = bsub.add_parser("primeind", help="0/1 matrix with 1 where i+j is prime")
    bp.add_argument("--n", type=int, required=True)
    bp.add_argument("--out", default=None)

    bcb = bsub.add_parser("checkerboard", help="random checkerboard-supported integer matrix")
    bcb.add_argument("--n", type=int, required=True)
    bcb.add_argument("--seed", type=int, required=True)
    bcb.add_argument("--symmetric", action="store_true")
    bcb.add_argument("--out", default=None)

    bsk = bsub.add_parser("skewcheckerboard", help="random skew checkerboard matrix of order 2m")
    bsk.add_argument("--m", type=int, required=True)
    bsk.add_argument("--seed", type=int, required=True)
    bsk.add_argument("--out", default=None)

    bpe = bsub.add_parser("polyeval", help="[P(i, j)] for a low-degree integer polynomial")
    bpe.add_argument("--n", type=int, required=True)
    bpe.add_argument("--coeffs", required=True,
                     help="JSON list of lists: coeffs[k][l] multiplies x^k * j^l")
    bpe.add_argument("--out", default=None)

    d = sub.add_parser("det", help="determinant of a matrix file ('-' for stdin)")
    d.add_argument("matrix")
    d.add_argument("--mod", type=int, default=None, help="reduce an exact matrix mod this")
    d.add_argument("--engine", choices=("auto", "field", "bareiss", "naive", "checkerboard"),
                   default="auto")
    d.set_defaults(handler=cmd_det)

    q = sub.add_parser("per", help="permanent of a matrix file ('-' for stdin)")
    q.add_argument("matrix")
    q.add_argument("--mod", type=int, default=None, help="reduce an exact matrix mod this")
    q.add_argument("--engine", choices=("auto", "ryser", "naive", "checkerboard"), default="auto")
    q.add_argument("--chunks", type=int, default=1,
                   help="evaluate the subset range in this many chunks (same result)")
    q.set_defaults(handler=cmd_per)

    c = sub.add_parser("check", help="run a single check")
    c.add_argument("check", choices=("eq15", "p3", "reflection", "dp-theorem",
                                     "background", "column-relation", "conj"))
    c.add_argument("--p", type=int, default=None)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--c", type=int, default=None)
    c.add_argument("--d", type=int, default=None)
    c.add_argument("--id", type=int, default=None, help="conjecture number for 'conj'")
    c.add_argument("--variant", choices=verify.VANISHING_VARIANTS, default=None)
    c.add_argument("--which", choices=verify.INVERSE_FORM_WHICH, default=None)
    c.add_argument("--per-order-cap", type=int, default=None,
                   help="override the permanent size gate")
    _add_format_flag(c)
    c.set_defaults(handler=cmd_check)

    s = sub.add_parser("sweep", help="run a check over a parameter range")
    s.add_argument("check", choices=("eq15", "p3", "reflection", "dp-theorem",
                                     "background", "column-relation", "conj"))
    s.add_argument("--id", type=int, default=None, help="conjecture number for 'conj'")
    s.add_argument("--pmin", type=int, default=3)
    s.add_argument("--pmax", type=int, default=None)
    s.add_argument("--nmin", type=int, default=5)
    s.add_argument("--nmax", type=int, default=None)
    s.add_argument("--cmax", type=int, default=None)
    s.add_argument("--dmax", type=int, default=None)
    s.add_argument("--variant", choices=verify.VANISHING_VARIANTS, default=None)
    s.add_argument("--which", choices=verify.INVERSE_FORM_WHICH, default=None)
    s.add_argument("--jobs", type=int, default=1,
                   help="parallel workers (changes wall time only, never output)")
    s.add_argument("--per-order-cap", type=int, default=None,
                   help="override the permanent size gate")
    _add_format_flag(s)
    s.set_defaults(handler=cmd_sweep)

    b.set_defaults(handler=cmd_build)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:  # pragma: no cover
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
