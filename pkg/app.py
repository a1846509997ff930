import argparse
import json
import logging
import sys
from typing import List, Optional

from app_components.instance_generator import KINDS, gen_instance, parse_params
from app_components.pmap_checker import check_table_file
from app_components.report_renderer import console_summary, write_report, write_table
from app_components.settings import FORMATS, PROFILES, build_config, resolve_seed
from app_components.suite_runner import SUITE_NAMES, exit_status, projection_pair_table, run_suite
from utils.data_processing import pairs_to_frame
from utils.errors import OplatError

logger = logging.getLogger("oplat")

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _add_suite_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--profile", choices=tuple(PROFILES), help="preset for count, dims and the extension sweep (default quick)"
    )
    parser.add_argument("--seed", help="64-bit seed, decimal or 0x-prefixed (falls back to OPLAT_SEED)")
    parser.add_argument("--tol", type=float, help="numerical tolerance")
    parser.add_argument("--epsilon", type=float, help="witness slack for square intervals")
    parser.add_argument("--dims", type=int, help="largest matrix dimension")
    parser.add_argument("--count", type=int, help="instances per check")
    parser.add_argument("--out", help="report file (stdout when omitted)")
    parser.add_argument("--format", choices=FORMATS, help="report format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oplat", description="Order lattices of operator systems: verification suites")
    parser.add_argument("--log-level", default="WARNING", help="logging level (default WARNING)")
    commands = parser.add_subparsers(dest="command", required=True)

    suite = commands.add_parser("run-suite", help="run a verification suite and write its report")
    suite.add_argument("name", choices=SUITE_NAMES + ("all",))
    _add_suite_flags(suite)

    instance = commands.add_parser("gen-instance", help="emit a reproducible instance as JSON")
    instance.add_argument("kind", choices=KINDS)
    instance.add_argument("--param", action="append", metavar="KEY=VALUE", help="instance parameter")
    instance.add_argument("--seed")
    instance.add_argument("--out")

    pmap = commands.add_parser("pmap", help="𝒫-map table tools")
    pmap_commands = pmap.add_subparsers(dest="pmap_command", required=True)
    check = pmap_commands.add_parser("check", help="check the decorations of a 𝒫-map table file")
    check.add_argument("--table", required=True)
    check.add_argument("--decorations", help="comma separated; defaults to those the table claims")
    check.add_argument("--order", help="JSON file of [i, j] pairs: domain[i] precedes domain[j]")
    check.add_argument("--out")
    check.add_argument("--format", choices=FORMATS)

    pairs = commands.add_parser("pairs", help="per-pair table of principal angles and meet iterations")
    _add_suite_flags(pairs)
    return parser


def _configure_logging(level: str) -> None:
    numeric = getattr(logging, str(level).upper(), None)
    if not isinstance(numeric, int):
        raise OplatError(f"Unknown log level: {level}")
    logging.basicConfig(level=numeric, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _run(args: argparse.Namespace) -> int:
    if args.command == "run-suite":
        cfg = build_config(args)
        rows = run_suite(args.name, cfg)
        write_report(rows, cfg, args.name)
        console_summary(rows)
        return exit_status(rows)

    if args.command == "gen-instance":
        data = gen_instance(args.kind, parse_params(args.param), resolve_seed(args.seed))
        text = json.dumps(data, indent=2, sort_keys=True)
        if args.out:
            with open(args.out, "w") as file:
                file.write(text + "\n")
        else:
            print(text)
        return EXIT_PASS

    if args.command == "pmap":
        cfg = build_config(args)
        rows = check_table_file(args.table, args.decorations, args.order)
        write_report(rows, cfg, "pmap-check")
        console_summary(rows)
        return exit_status(rows)

    if args.command == "pairs":
        cfg = build_config(args)
        write_table(pairs_to_frame(projection_pair_table(cfg)), cfg)
        return EXIT_PASS

    raise OplatError(f"Unknown command: {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    try:
        _configure_logging(args.log_level)
        return _run(args)
    except (OplatError, OSError) as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
