"""
Command Line Module

The grmw console script: batch access to the weight formulas, constructors,
exhaustive oracles, arrangement tables and verification suites.

Exit codes:
    0  success
    1  a verification claim failed
    2  invalid flags or parameters
    3  an enumeration budget was exceeded
"""
import argparse
import csv
import io
import json
import sys
from typing import List, Optional, Sequence

from robot.api import logger

from grmbot import __version__
from grmbot.modules import arrangements, constructors, grm, spectrum, verification
from grmbot.modules.gf import field_for_order
from grmbot.plugins.data import load_grid
from grmbot.plugins.store import ReportStore
from grmbot.utils.errors import BudgetExceeded, GrmError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

WEIGHT_HEADER = ["q", "m", "r", "weight", "value", "status", "provenance"]


def _modulus(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise ValueError(f"--modulus expects comma-separated integers, got '{text}'")


def _dump_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _weight_rows(cell: dict) -> List[list]:
    key = [cell["q"], cell["m"], cell["r"]]
    return [
        key + [name, answer.value, answer.status.value, answer.provenance]
        for name, answer in grm.weight_answers(cell["q"], cell["m"], cell["r"]).items()
    ]


def _weight_text(cell: dict) -> str:
    lines = [f"R_{cell['q']}({cell['r']},{cell['m']})"]
    for row in _weight_rows(cell):
        lines.append(f"  {row[3]} = {row[4]}  {row[5]}  [{row[6]}]")
    return "\n".join(lines) + "\n"


def cmd_weights(args) -> tuple:
    if args.grid:
        cells = load_grid(args.grid)
    elif None in (args.q, args.m, args.r):
        raise ValueError("weights needs q m r or --grid FILE")
    else:
        field_for_order(args.q, _modulus(args.modulus))
        cells = [{"q": args.q, "m": args.m, "r": args.r}]

    if args.format == "csv":
        return _dump_csv(WEIGHT_HEADER, [row for cell in cells for row in _weight_rows(cell)]), EXIT_OK
    if args.format == "text":
        return "".join(_weight_text(cell) for cell in cells), EXIT_OK
    records = [grm.answer_record(cell["q"], cell["m"], cell["r"]) for cell in cells]
    return _dump_json(records if args.grid else records[0]), EXIT_OK


def cmd_construct(args) -> tuple:
    field = field_for_order(args.q, _modulus(args.modulus))
    manifest = constructors.construct(args.family, args.q, args.m, args.a, args.b,
                                      branch=args.branch, field=field)
    if args.format == "text":
        text = (f"{manifest['family']} {manifest['params']}: claimed {manifest['claimed_weight']}, "
                f"measured {manifest['measured_weight']} [{manifest['provenance']}]\n")
        return text, EXIT_OK
    return _dump_json(manifest), EXIT_OK


def cmd_spectrum(args) -> tuple:
    field = field_for_order(args.q, _modulus(args.modulus))
    logger.console(f"Enumerating R_{args.q}({args.r},{args.m})", stream="stderr")
    result = spectrum.exhaustive_spectrum(
        args.q, args.m, args.r,
        max_distinct=args.max_distinct,
        weight_cap=args.cap,
        shards=args.shards,
        workers=args.threads,
        field=field,
    )
    if args.format == "csv":
        return _dump_csv(spectrum.SPECTRUM_HEADER, result.csv_rows()), EXIT_OK
    if args.format == "text":
        lines = [f"R_{args.q}({args.r},{args.m}): {result.enumerated} codewords"]
        lines += [f"  {w}: {count}" for w, count in result.distinct_weights]
        return "\n".join(lines) + "\n", EXIT_OK
    return _dump_json(result.to_json()), EXIT_OK


def cmd_arrangements(args) -> tuple:
    field_for_order(args.q, _modulus(args.modulus))
    if args.oracle:
        logger.console(f"Enumerating arrangement types for q={args.q}, m={args.m}", stream="stderr")
        rows = arrangements.top3_report_rows(args.q, args.m, args.d, args.top)
    else:
        rows = arrangements.catalog_rows(args.q, args.m, args.d, args.top)
    if args.format == "json":
        return _dump_json([dict(zip(arrangements.REPORT_HEADER, row)) for row in rows]), EXIT_OK
    return _dump_csv(arrangements.REPORT_HEADER, rows), EXIT_OK


def cmd_verify(args) -> tuple:
    report = verification.run_verification_suite(
        args.suite,
        extended=args.extended,
        workers=args.threads,
        seed=args.seed,
        timing=not args.no_timing,
    )
    data = report.to_json()
    if args.db:
        store = ReportStore(args.db)
        try:
            store.save(args.campaign or args.suite, data)
        finally:
            store.close()
    for claim in report.failures():
        logger.console(f"FAIL {claim.id}: expected {claim.expected}, measured {claim.measured}",
                       stream="stderr")
    status = EXIT_OK if report.passed else EXIT_FAILED
    if args.format == "text":
        passed = len(report.claims) - len(report.failures())
        return f"{args.suite}: {passed}/{len(report.claims)} claims passed\n", status
    return _dump_json(data), status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grmw",
        description="Weights of generalized Reed-Muller codes: formulas, witnesses and oracles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="Write the report to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--modulus", help="Field modulus coefficients, constant term first, e.g. 1,1,1")

    sub = parser.add_subparsers(dest="command", required=True)

    p_weights = sub.add_parser("weights", parents=[common], help="W_1, W_2 and W_3 of R_q(r,m)")
    p_weights.add_argument("q", type=int, nargs="?")
    p_weights.add_argument("m", type=int, nargs="?")
    p_weights.add_argument("r", type=int, nargs="?")
    p_weights.add_argument("--grid", help="CSV, JSON or YAML file of q,m,r rows")
    p_weights.set_defaults(handler=cmd_weights, default_format="json")

    p_construct = sub.add_parser("construct", parents=[common], help="Build and measure a codeword")
    p_construct.add_argument("--family", choices=constructors.CONSTRUCT_FAMILIES, default="third")
    p_construct.add_argument("--branch", help="Upper-bound branch id for --family theorem3")
    for name in ("q", "m", "a", "b"):
        p_construct.add_argument(name, type=int)
    p_construct.set_defaults(handler=cmd_construct, default_format="json")

    p_spectrum = sub.add_parser("spectrum", parents=[common], help="Exhaustive weight spectrum")
    for name in ("q", "m", "r"):
        p_spectrum.add_argument(name, type=int)
    p_spectrum.add_argument("--shards", type=int, default=1)
    p_spectrum.add_argument("--threads", type=int, default=1, help="Worker processes")
    p_spectrum.add_argument("--cap", type=int, default=None, help="Tally weights above W only as a count")
    p_spectrum.add_argument("--max-distinct", type=int, default=None)
    p_spectrum.set_defaults(handler=cmd_spectrum, default_format="json")

    p_arr = sub.add_parser("arrangements", parents=[common], help="Arrangement catalog or oracle")
    for name in ("q", "m", "d"):
        p_arr.add_argument(name, type=int)
    p_arr.add_argument("--top", type=int, default=3)
    p_arr.add_argument("--oracle", action="store_true", help="Enumerate every arrangement type")
    p_arr.set_defaults(handler=cmd_arrangements, default_format="csv")

    p_verify = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    p_verify.add_argument("--suite", choices=verification.SUITES, default="all")
    p_verify.add_argument("--extended", action="store_true")
    p_verify.add_argument("--threads", type=int, default=1, help="Worker processes")
    p_verify.add_argument("--seed", type=int, default=verification.DEFAULT_SEED)
    p_verify.add_argument("--db", help="SQLite file receiving the report")
    p_verify.add_argument("--campaign", help="Campaign name in the store, defaults to the suite")
    p_verify.add_argument("--no-timing", action="store_true", help="Report elapsed_ms as 0")
    p_verify.set_defaults(handler=cmd_verify, default_format="json")
    return parser


def _check_flags(parser: argparse.ArgumentParser, args) -> None:
    if args.format is None:
        args.format = args.default_format
    if args.command == "arrangements" and args.format == "text":
        parser.error("arrangements supports --format csv or json")
    if args.command in ("construct", "verify") and args.format == "csv":
        parser.error(f"{args.command} supports --format json or text")
    for flag in ("shards", "threads", "top"):
        value = getattr(args, flag, None)
        if value is not None and value < 1:
            parser.error(f"--{flag} must be at least 1")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_flags(parser, args)
    try:
        text, status = args.handler(args)
    except BudgetExceeded as e:
        print(f"grmw: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (GrmError, ValueError, FileNotFoundError) as e:
        print(f"grmw: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
