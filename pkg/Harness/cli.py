#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

"""Command line entry point.

Exit codes: 0 success, 2 usage or parse errors, 3 invalid input (the
``ValueError`` family), 4 numeric or budget failures (the ``RuntimeError``
and ``ArithmeticError`` families).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from typing import Any, Sequence

from Harness import experiments
from Harness.config import ExperimentConfig, load_config
from Harness.reports import default_run_name, render, write_report

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID_INPUT = 3
EXIT_NUMERIC_FAILURE = 4

logger = logging.getLogger("BoltzmannMapTools")


def _setup_logging(verbose: bool):
    level = logging.DEBUG if verbose else os.environ.get("BMT_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _int_pair(text: str) -> list[int]:
    values = _int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma separated integers, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file mirroring the flags")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--threads", type=int, help="worker processes")
    common.add_argument("--out", help="report path, '-' for stdout; a petname when unset")
    common.add_argument("--format", choices=["json", "csv"], help="report format")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--samples", type=int)
    common.add_argument("--radius", type=int)
    common.add_argument("--sizes", type=_int_list, help="comma separated conditioning sizes")
    common.add_argument("--size-functional", dest="size_functional",
                        help="V, E or F for maps, type weights such as 1,0 for trees")
    common.add_argument("--law", help="offspring law file or example name")
    common.add_argument("--weights", help="weight file, example name or preset (even:p=2, odd:p=1, uipm)")
    common.add_argument("--period-budget", dest="period_budget", type=int)
    common.add_argument("--vertex-cap", dest="vertex_cap", type=int)
    common.add_argument("--attempt-cap", dest="attempt_cap", type=int)
    common.add_argument("--window-height", dest="window_height", type=int)
    common.add_argument("--window-cap", dest="window_cap", type=int)
    common.add_argument("--no-verify", dest="verify", action="store_false", default=None,
                        help="skip the second look at certified balls")
    common.add_argument("--tail-range", dest="tail_range", type=_int_pair, help="low,high of the survival fit")

    parser = argparse.ArgumentParser(prog="BoltzmannMapTools",
                                     description="Galton-Watson trees, Boltzmann maps and their local limits.")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="solve the admissibility system")
    analyze.add_argument("weights_file", nargs="?", help="weight file, example name or preset")

    sample = commands.add_parser("sample", parents=[common], help="sample trees, maps or infinite-map balls")
    sample.add_argument("what", choices=["tree", "map", "ball"])

    commands.add_parser("convergence", parents=[common], help="TV distance to the local limit")
    commands.add_parser("degree-tail", parents=[common], help="root degree survival of the infinite map")
    commands.add_parser("enumerate", parents=[common], help="audit the bijection on small mobiles")
    commands.add_parser("period", parents=[common], help="size lattices of a law or of a weight sequence")
    return parser


_config_flags = ("seed", "threads", "out", "format", "samples", "radius", "sizes", "size_functional", "law",
                 "weights", "period_budget", "vertex_cap", "attempt_cap", "window_height", "window_cap", "verify",
                 "tail_range")


def _run(args: argparse.Namespace, config: ExperimentConfig) -> dict[str, Any]:
    if args.command == "analyze":
        return experiments.analyze(config)
    if args.command == "sample":
        return experiments.sample(config, args.what)
    if args.command == "convergence":
        return experiments.convergence(config)
    if args.command == "degree-tail":
        return experiments.degree_tail(config)
    if args.command == "enumerate":
        return experiments.enumerate_maps(config)
    return experiments.period_report(config)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    _setup_logging(args.verbose)

    overrides = {name: getattr(args, name) for name in _config_flags}
    if args.command == "analyze" and args.weights_file is not None:
        overrides["weights"] = args.weights_file
    try:
        config = load_config(args.config, overrides)
    except (OSError, ValueError, TypeError) as exc:
        logger.error("Could not load the configuration: %s", exc)
        return EXIT_USAGE

    started = time.monotonic()
    try:
        report = _run(args, config)
    except ValueError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INVALID_INPUT
    except (RuntimeError, ArithmeticError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_NUMERIC_FAILURE
    logger.info("%s finished in %.2f s", report["command"], time.monotonic() - started)

    if config.out == "-":
        sys.stdout.write(render(report, config.format))
    else:
        path = config.out or default_run_name(report["command"], config.format)
        write_report(report, path, config.format)
        logger.info("Report written to %s", path)
    return EXIT_OK

