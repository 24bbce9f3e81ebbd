"""Command-line front end.

Exit codes: 0 ok, 1 not admissible or a failed verification suite, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .report import (
    ParseError,
    ShapeError,
    parse_matrix,
    parse_seeds,
    run_catalog,
    run_check,
    run_sample,
    run_verify,
    to_json,
    to_text,
)
from .zeroset import DEFAULT_MAX_ITER, DEFAULT_TOL

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _add_matrix_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "matrix",
        nargs="?",
        help='weight matrix, rows separated by ";" (e.g. "1 0 1 1; 0 1 1 1; 1 1 0 1")',
    )
    p.add_argument("--matrix-file", help="read the matrix from a file ('-' for stdin)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkquotient",
        description="Admissibility, singular-locus catalogs and zero-set samples for torus weights.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="solver tolerance")
    common.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    common.add_argument("--seeds", default="0-9", help='seeds, e.g. "0-99" or "1,5,7"')

    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("check", "minors, boxes and admissibility"),
        ("catalog", "singular locus catalog"),
        ("sample", "numerical points of the zero set"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        _add_matrix_args(p)
    sub.add_parser("verify", parents=[common], help="run the built-in identity and classification suites")
    return parser


def _read_matrix(args, parser: argparse.ArgumentParser):
    if args.matrix is not None and args.matrix_file is not None:
        parser.error("give either a matrix argument or --matrix-file, not both")
    if args.matrix_file is not None:
        if args.matrix_file == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(args.matrix_file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                parser.error(f"cannot read matrix file: {exc}")
    elif args.matrix is not None:
        text = args.matrix
    else:
        parser.error("a weight matrix is required")
    try:
        return parse_matrix(text)
    except (ParseError, ShapeError) as exc:
        parser.error(str(exc))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        seeds = parse_seeds(args.seeds)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"qkquotient: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.tol <= 0 or args.max_iter < 0:
        print("qkquotient: error: --tol must be positive and --max-iter non-negative", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "verify":
            report = run_verify(seed=seeds[0])
        else:
            matrix = _read_matrix(args, parser)
            if args.command == "check":
                report = run_check(matrix)
            elif args.command == "catalog":
                report = run_catalog(matrix)
            else:
                report = run_sample(matrix, seeds, tol=args.tol, max_iter=args.max_iter)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE

    out = to_json(report) if args.format == "json" else to_text(report)
    sys.stdout.write(out)
    return EXIT_OK if report["ok"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
