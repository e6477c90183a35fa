"""
qrange command-line entry point.

Exit codes: 0 success, 1 failed verify checks, 2 invalid input or config,
3 infeasible constraint set, 4 whole-plane result requested as CSV or SVG.
"""

import argparse
import logging

from qrange.api import cloud, radius, semihilbert, spectra, verify
from qrange.api.common import CommandError, exit_code_for
from qrange.config import LOG_LEVEL

logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrange",
        description="Joint q-numerical ranges and radii of complex matrix tuples",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (cloud, radius, spectra, semihilbert, verify):
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        return args.handler(args)
    except CommandError as e:
        logger.error(f"{args.command}: {e.detail}")
        return e.exit_code
    except ValueError as e:
        code = exit_code_for(e)
        logger.error(f"{args.command}: {type(e).__name__}: {e}")
        return code
    except Exception as e:
        logger.error(f"{args.command} failed unexpectedly: {e}", exc_info=True)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
