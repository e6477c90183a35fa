"""
`qrange verify`: run the property suite and write the report array.
"""

import argparse
import logging
from pathlib import Path

from pydantic import ValidationError

from qrange.api.common import (
    EXIT_FAILED_CHECKS,
    EXIT_INVALID,
    EXIT_OK,
    CommandError,
    emit_json,
    parse_complex,
)
from qrange.models import SuiteConfig
from qrange.services.verify import run_suite

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run the property suite")
    parser.add_argument("--config", type=Path, default=None, help="SuiteConfig document (JSON)")
    parser.add_argument("--seed", type=int, default=None, help="Suite seed (CLI > config > default 42)")
    parser.add_argument(
        "--q",
        type=parse_complex,
        action="append",
        default=None,
        help="q value to test; repeat for several",
    )
    parser.add_argument("--checks", default=None, help="Comma-separated check ids or id prefixes")
    parser.add_argument("--tsing-center", choices=["corrected", "printed"], default=None)
    parser.add_argument("--samples", type=int, default=None, help="Points per sampled cloud")
    parser.add_argument("--out", type=Path, default=None)
    parser.set_defaults(handler=cmd_verify)


def suite_config(args: argparse.Namespace) -> SuiteConfig:
    """
    Config file values overridden by flags.

    Raises:
        CommandError: unreadable or invalid config (exit 2)
    """
    data: dict = {}
    if args.config is not None:
        try:
            data = SuiteConfig.model_validate_json(args.config.read_bytes()).model_dump()
        except OSError as e:
            raise CommandError(EXIT_INVALID, f"cannot read suite config {args.config}: {e}")
        except ValidationError as e:
            raise CommandError(EXIT_INVALID, f"invalid suite config {args.config}: {e}")

    overrides = {
        "seed": args.seed,
        "q_values": args.q,
        "checks": [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else None,
        "tsing_center": args.tsing_center,
        "samples": args.samples,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SuiteConfig.model_validate(data)
    except ValidationError as e:
        raise CommandError(EXIT_INVALID, f"invalid suite config: {e}")


def cmd_verify(args: argparse.Namespace) -> int:
    """
    Returns:
        0 when no check failed, 1 otherwise
    """
    cfg = suite_config(args)
    logger.info(f"verify: seed={cfg.seed} q={cfg.q_values} checks={cfg.checks or 'all'}")
    reports = run_suite(cfg)
    emit_json([r.model_dump(mode="json") for r in reports], args.out)

    failed = [r.check_id for r in reports if r.status == "fail"]
    skipped = sum(r.status == "skip" for r in reports)
    logger.info(f"verify: {len(reports)} reports, {len(failed)} failed, {skipped} skipped")
    if failed:
        logger.error(f"verify: failed checks: {', '.join(failed)}")
        return EXIT_FAILED_CHECKS
    return EXIT_OK
