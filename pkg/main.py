#!/usr/bin/env python3
"""
sgrp - finite semigroups and their two-sided Karnofsky-Rhodes expansions

Commands:
- info      order, idempotents, Green's classes, minimal ideal
- kr        expansion of (S, φ), optional DOT export and word-oracle cross-check
- check     equidiv | almostequidiv | krcover | lsc | identity EQN | independence | adjunction | lifting
- tower     iterated expansions with connecting maps and absorption checks
- freeprod  truncated free products and separation of alternating words
- dot       DOT export of the two-sided Cayley graph

Inputs are JSON files or `builtin:<name>`.
Exit codes: 0 holds, 1 fails (witness in the report), 2 budget exhausted, 3 input error.

Usage: python main.py <command> [flags] <files>
"""

import argparse
import json
import logging
import signal
import sys
import threading
import time

from pydantic import ValidationError

from classes.Commands import CHECK_PROPERTIES, RunConfig, emit, error_report, run_command
from classes.DataLogger import DataLogger
from classes.Errors import SemigroupError
from classes.PerformanceMonitor import performance_monitor
from classes.globals import (
    DEFAULT_BUDGET, DEFAULT_CAP, DEFAULT_MAX_LENGTH, DEFAULT_TOWER_DEPTH, EXIT_BUDGET, EXIT_INPUT_ERROR,
    setup_logging,
)

# Set by the signal handler; budgeted searches stop at their next step
cancel_event = threading.Event()


def signal_handler(signum, frame):
    """Handle shutdown signals: cancel the running search"""
    logger = logging.getLogger('main')
    logger.info("Shutdown signal received. Cancelling search...")
    if cancel_event.is_set():
        sys.exit(EXIT_BUDGET)
    cancel_event.set()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "text"), default="json",
                        help="report format (default: json)")
    common.add_argument("-o", "--output", help="write the report (DOT for 'dot') to this file")
    common.add_argument("--no-meta", action="store_true", help="omit timing data for byte-identical reports")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help=f"step budget for expansions and searches (default: {DEFAULT_BUDGET})")
    common.add_argument("--ledger", metavar="DIR", help="append a row per run to DIR/runs_YYYYMMDD.log")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--log-dir", default=None, help="directory of the rotating log file")

    parser = argparse.ArgumentParser(prog="sgrp", description="Finite semigroups and two-sided KR expansions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[common], help="structure report")
    p.add_argument("inputs", nargs=1, metavar="FILE")

    p = sub.add_parser("kr", parents=[common], help="two-sided Karnofsky-Rhodes expansion")
    p.add_argument("inputs", nargs=1, metavar="FILE")
    p.add_argument("--gens", help="letter map, e.g. a=e,b=f")
    p.add_argument("--dot", metavar="OUT", help="also write the Cayley graph as DOT")
    p.add_argument("--oracle", type=int, metavar="L", help="cross-check against all words of length <= L")

    p = sub.add_parser("check", parents=[common], help="decide a property")
    p.add_argument("inputs", nargs=1, metavar="FILE")
    p.add_argument("check_property", choices=CHECK_PROPERTIES, metavar="PROPERTY",
                   help=" | ".join(CHECK_PROPERTIES))
    p.add_argument("equation", nargs="?", help="identity for 'check identity', e.g. xyx=x")
    p.add_argument("--gens", help="letter map, e.g. a=e,b=f")

    p = sub.add_parser("tower", parents=[common], help="iterated expansions")
    p.add_argument("inputs", nargs=1, metavar="FILE")
    p.add_argument("-n", "--depth", type=int, default=DEFAULT_TOWER_DEPTH,
                   help=f"levels to build (default: {DEFAULT_TOWER_DEPTH})")
    p.add_argument("--absorb", metavar="LETTER", help="check z[w]z = z for z the ω-power of LETTER")
    p.add_argument("-L", "--max-length", dest="max_length", type=int, default=DEFAULT_MAX_LENGTH,
                   help=f"word length bound (default: {DEFAULT_MAX_LENGTH})")
    p.add_argument("--lsc", dest="lsc_probe", action="store_true",
                   help="count cancellation violations of short words per level")
    p.add_argument("--gens", help="letter map, e.g. a=e,b=f")

    p = sub.add_parser("freeprod", parents=[common], help="truncated free product")
    p.add_argument("inputs", nargs="+", metavar="FILE")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"alternation blocks kept (default: {DEFAULT_CAP})")
    p.add_argument("--separate", nargs=2, metavar=("U", "V"),
                   help="two alternating words, as symbol words or JSON [[factor, element], ...]")

    p = sub.add_parser("dot", parents=[common], help="DOT export of the two-sided Cayley graph")
    p.add_argument("inputs", nargs=1, metavar="FILE")
    p.add_argument("--gens", help="letter map, e.g. a=e,b=f")
    p.add_argument("--only-reachable", action="store_true", help="only vertices on paths of words")
    return parser


def main(argv=None) -> int:
    """Main entry point for sgrp"""

    args = build_parser().parse_args(argv)

    # Setup signal handlers for cooperative cancellation
    signal.signal(signal.SIGINT, signal_handler)
    signal.signal(signal.SIGTERM, signal_handler)

    level = getattr(logging, args.log_level.upper(), None) if args.log_level else None
    logger = setup_logging(level, args.log_dir)
    logger.info("=" * 60)
    logger.info(f"SGRP {args.command.upper()} - STARTING")
    logger.info(f"Inputs: {', '.join(args.inputs)}")
    logger.info(f"Budget: {args.budget:,} steps")
    logger.info("=" * 60)

    start = time.perf_counter()
    exit_code = EXIT_INPUT_ERROR
    verdict = "error"
    input_hash = ""

    try:
        config = RunConfig.from_namespace(args)
        result = run_command(config, cancel_event)
        text = emit(result, config)
        if not config.output or config.command == "dot":
            sys.stdout.write(text)
        exit_code, verdict, input_hash = result.exit_code, result.verdict, result.input_hash

    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        sys.stdout.write(json.dumps(error_report(args.command, e), default=str) + "\n")
    except SemigroupError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.stdout.write(json.dumps(error_report(args.command, e), default=str) + "\n")
    except OSError as e:
        logger.error(f"I/O error: {e}")
        sys.stdout.write(json.dumps(error_report(args.command, e), default=str) + "\n")
    except KeyboardInterrupt:
        logger.info("Keyboard interrupt received")
        exit_code, verdict = EXIT_BUDGET, "cancelled"
    except Exception as e:
        logger.error(f"Fatal error: {str(e)}")
        logger.error("", exc_info=True)
    finally:
        try:
            elapsed = time.perf_counter() - start
            if args.ledger:
                ledger = DataLogger(args.ledger)
                ledger.log_run(args.command, input_hash, verdict, exit_code, elapsed)
                ledger.close_log_files()

            performance_monitor.log_performance_report()
            logger.info("=" * 60)
            logger.info(f"SGRP {args.command.upper()} - DONE: {verdict} (exit {exit_code}, {elapsed:.3f}s)")
            logger.info("=" * 60)

        except Exception as e:
            logger.error(f"Error during shutdown: {str(e)}")

    return exit_code


if __name__ == "__main__":
    sys.exit(main())
