"""
`qrange cloud`: sample the joint q-numerical range of a tuple.
"""

import argparse
import logging
from pathlib import Path

from qrange.api.common import (
    EXIT_OK,
    add_common_arguments,
    emit_cloud,
    load_tuple,
    parse_projection,
)
from qrange.config import DEFAULT_SEED, SHARD_SIZE
from qrange.services.range_engine import cloud_joint

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("cloud", help="Sample JtW_q(T) into CSV, JSON or SVG")
    parser.add_argument("--input", type=Path, required=True, help="Tuple document (JSON)")
    add_common_arguments(parser, DEFAULT_SEED)
    parser.add_argument("--count", type=int, default=1000, help="Number of sampled pairs")
    parser.add_argument("--mode", choices=["complex", "real"], default="complex")
    parser.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    parser.add_argument(
        "--project",
        type=parse_projection,
        default=None,
        help="Real columns i,j plotted in SVG output for d > 1",
    )
    parser.set_defaults(handler=cmd_cloud)


def cmd_cloud(args: argparse.Namespace) -> int:
    """
    Sample the tuple's joint range and write it out.

    Args:
        args: parsed flags (input, q, count, seed, mode, format, out, project)

    Returns:
        Exit code 0

    Raises:
        MalformedInputError: unreadable or invalid tuple document
        InfeasibleConstraintError: n = 1 with |q| < 1
    """
    if args.count < 1:
        raise ValueError(f"--count must be >= 1, got {args.count}")
    T = load_tuple(args.input)
    logger.info(
        f"cloud: {args.input} (d={T.d}, n={T.n}) q={args.q} count={args.count} "
        f"seed={args.seed} mode={args.mode}"
    )
    cloud = cloud_joint(T, args.q, args.count, args.seed, mode=args.mode, shard_size=SHARD_SIZE)
    emit_cloud(cloud, args.format, args.out, args.project)
    return EXIT_OK
