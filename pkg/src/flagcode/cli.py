"""Command line front end.

Exit codes: 0 success, 2 usage or parse error, 3 validation error (e.g. a
matrix that is not a codeword), 4 cell failure, 5 enumeration budget
exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence

from . import formats
from .codes import (
    build_max_distance_code,
    build_syndrome_table,
    decode,
    example_code_t,
    exhaustive_nearest,
    min_distance,
    random_code,
)
from .errors import BudgetError, CellError, DomainError, FlagCodeError, ParseError, ValidationError
from .flags import (
    UpperTriangular,
    d_max,
    flag_distance,
    flag_from_matrix,
    flag_rank,
    matrix_from_flag,
    packed_size,
)
from .gf import FieldSpec
from .netsim import receiver_reconstruct, run_campaign, source_emit

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_CELL, EXIT_BUDGET = 0, 2, 3, 4, 5


class UsageError(FlagCodeError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _field_from_args(args) -> FieldSpec:
    if args.field is not None:
        return formats.parse_field(args.field)
    if args.q is None:
        raise UsageError("give --q or --field")
    try:
        return FieldSpec.from_order(args.q)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _matrix_arg(args, spec: FieldSpec, n: int) -> UpperTriangular | None:
    if getattr(args, "matrix", None) is not None:
        return formats.parse_upper_triangular(args.matrix, spec, n)
    if getattr(args, "matrix_file", None) is not None:
        A = formats.parse_matrix_file(_read(args.matrix_file), spec)
        if A.n != n:
            raise ParseError(f"matrix has n={A.n}, code has n={n}")
        return A
    return None


# --- commands ---------------------------------------------------------------------------


def cmd_gen_code(args) -> int:
    if args.kind == "example-T":
        if (args.q not in (None, 3)) or (args.n not in (None, 4)) or args.field is not None:
            raise UsageError("example-T is defined over GF(3) with n=4")
        code = example_code_t()
    else:
        if args.n is None or args.n < 1:
            raise UsageError("--n must be a positive integer")
        spec = _field_from_args(args)
        if args.kind == "max-distance":
            code = build_max_distance_code(spec, args.n)
        else:
            N = packed_size(args.n)
            if args.dim is None or not 1 <= args.dim <= N:
                raise UsageError(f"random codes need --dim in 1..{N}")
            if args.seed is None:
                raise UsageError("random codes need --seed")
            code = random_code(spec, args.n, args.dim, random.Random(args.seed))
    _write(args.out, formats.format_code(code))
    return EXIT_OK


def cmd_code_info(args) -> int:
    code = formats.parse_code(_read(args.code))
    lines = [f"field: {code.spec}", f"n: {code.n}", f"dim: {code.dim}"]
    if code.dim == 0:
        lines.append("min_distance: undefined (zero code)")
    else:
        try:
            lines.append(f"min_distance: {min_distance(code)}")
        except BudgetError as exc:
            lines.append(f"min_distance: skipped ({exc})")
    lines.append(f"dual_dim: {len(code.dual_basis)}")
    lines.append(f"d_max(n+1): {d_max(code.n + 1)}")
    _write(None, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_encode(args) -> int:
    code = formats.parse_code(_read(args.code))
    if args.index is not None:
        try:
            delta = code.codeword_from_index(args.index)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
    else:
        delta = _matrix_arg(args, code.spec, code.n)
        if delta is None:
            raise UsageError("give --index, --matrix or --matrix-file")
        if not args.raw and not code.contains(delta):
            raise ValidationError("matrix is not a codeword (nonzero syndrome); pass --raw to send it anyway")
    text = formats.format_packets(code.spec, code.n, source_emit(delta))
    if args.show_flag:
        text += "\n" + formats.format_flag(flag_from_matrix(delta).spaces)
    _write(args.out, text)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = formats.parse_code(_read(args.code))
    if args.received is not None:
        received = formats.parse_received(_read(args.received))
        if received["spec"] != code.spec or received["n"] != code.n:
            raise ParseError("received data does not match the code's field or n")
        if "flag" in received:
            spaces = received["flag"]
        else:
            spaces = receiver_reconstruct(received["packets"], code.spec, code.n)
        try:
            A = matrix_from_flag(spaces)
        except CellError as exc:
            sys.stderr.write(f"cell failure: {exc}\n")
            return EXIT_CELL
    else:
        A = _matrix_arg(args, code.spec, code.n)
        if A is None:
            raise UsageError("give --received, --matrix or --matrix-file")
    C = decode(build_syndrome_table(code), A)
    _write(None, f"extracted: {A}\ndecoded: {C}\ndistance: {flag_rank(A - C)}\n")
    return EXIT_OK


def cmd_oracle_mindist(args) -> int:
    code = formats.parse_code(_read(args.code))
    if code.dim == 0:
        raise UsageError("the zero code has no minimum distance")
    by_rank = min_distance(code)
    origin = flag_from_matrix(UpperTriangular.zero(code.spec, code.n))
    by_flags = min(flag_distance(origin, flag_from_matrix(cw)) for cw in code.codewords() if not cw.is_zero())
    _write(
        None,
        f"min_distance (flag rank): {by_rank}\n"
        f"min_distance (grassmann, via flags): {by_flags}\n"
        f"agree: {'yes' if by_rank == by_flags else 'no'}\n",
    )
    return EXIT_OK if by_rank == by_flags else EXIT_VALIDATION


def cmd_oracle_nearest(args) -> int:
    code = formats.parse_code(_read(args.code))
    A = _matrix_arg(args, code.spec, code.n)
    if A is None:
        raise UsageError("give --matrix or --matrix-file")
    C, dist = exhaustive_nearest(code, A)
    D = decode(build_syndrome_table(code), A)
    _write(
        None,
        f"nearest: {C}\ndistance: {dist}\n"
        f"syndrome_decoder: {D}\ndecoder_distance: {flag_rank(A - D)}\n",
    )
    return EXIT_OK


def cmd_flag_roundtrip(args) -> int:
    spec = _field_from_args(args)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    if args.matrix is not None:
        delta = formats.parse_upper_triangular(args.matrix, spec, args.n)
        flag = flag_from_matrix(delta)
        back = matrix_from_flag(flag)
        _write(None, formats.format_flag(flag.spaces) + f"roundtrip: {'ok' if back == delta else 'MISMATCH'}\n")
        return EXIT_OK if back == delta else EXIT_VALIDATION
    if args.random is None or args.seed is None:
        raise UsageError("give --matrix, or --random COUNT with --seed")
    rng = random.Random(args.seed)
    bad = 0
    for _ in range(args.random):
        delta = UpperTriangular.random(spec, args.n, rng)
        bad += matrix_from_flag(flag_from_matrix(delta)) != delta
    _write(None, f"roundtrip: {args.random - bad}/{args.random} ok\n")
    return EXIT_OK if not bad else EXIT_VALIDATION


def cmd_simulate(args) -> int:
    code = formats.parse_code(_read(args.code))
    topology = formats.parse_topology(_read(args.topology))
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    report = run_campaign(topology, code, args.trials, args.seed, error_weight=args.error_weight, workers=args.workers)
    if args.table is not None:
        _write(args.table, formats.format_report_table(report))
    text = formats.format_report_table(report) if args.format == "table" else formats.format_report_text(report)
    _write(None, text)
    return EXIT_OK


# --- parser -------------------------------------------------------------------------------


def _add_field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, help="field order (prime power)")
    p.add_argument("--field", help="field header, e.g. 'GF(2^2; 1,1,1)'")
    p.add_argument("--n", type=int, help="matrix size n (ambient dimension n+1)")


def _add_matrix_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--matrix", help="upper triangular matrix, rows ';'-separated, entries ','-separated")
    p.add_argument("--matrix-file", help="file with n=, field header and rows")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flagcode", description="Degenerate-flag network coding with flag rank metric codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-code", help="write a code file")
    _add_field_args(p)
    p.add_argument("--kind", required=True, choices=["max-distance", "example-T", "random"])
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen_code)

    p = sub.add_parser("code-info", help="dimension, minimum distance, dual dimension")
    p.add_argument("code")
    p.set_defaults(func=cmd_code_info)

    p = sub.add_parser("encode", help="source packets (and flag) for a codeword")
    p.add_argument("code")
    p.add_argument("--index", type=int, help="message index in [0, q^dim)")
    _add_matrix_args(p)
    p.add_argument("--raw", action="store_true", help="accept matrices outside the code")
    p.add_argument("--show-flag", action="store_true", help="append the flag subspaces")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="extract and syndrome-decode a received flag or matrix")
    p.add_argument("code")
    p.add_argument("--received", help="packets/flag file, e.g. the output of encode")
    _add_matrix_args(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("oracle-mindist", help="minimum distance by flag rank and by Grassmann distance")
    p.add_argument("code")
    p.set_defaults(func=cmd_oracle_mindist)

    p = sub.add_parser("oracle-nearest", help="brute-force nearest codeword")
    p.add_argument("code")
    _add_matrix_args(p)
    p.set_defaults(func=cmd_oracle_nearest)

    p = sub.add_parser("flag-roundtrip", help="check matrix -> flag -> matrix")
    _add_field_args(p)
    p.add_argument("--matrix")
    p.add_argument("--random", type=int, metavar="COUNT")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_flag_roundtrip)

    p = sub.add_parser("simulate", help="run a seeded simulation campaign")
    p.add_argument("code")
    p.add_argument("topology")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--format", choices=["text", "table"], default="text")
    p.add_argument("--table", help="also write the per-trial table here")
    p.add_argument("--error-weight", type=int, help="inject an extracted-matrix error of at most this flag rank")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except CellError as exc:
        sys.stderr.write(f"cell failure: {exc}\n")
        return EXIT_CELL
    except BudgetError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
