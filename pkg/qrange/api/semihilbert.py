"""
`qrange semihilbert`: the q-A-numerical range and radius of one matrix
under the semi-inner product ⟨x, y⟩_A = ⟨Ax, y⟩.
"""

import argparse
import logging
from pathlib import Path

from qrange.api.common import (
    EXIT_FULL_PLANE,
    EXIT_OK,
    CommandError,
    add_common_arguments,
    emit_cloud,
    emit_json,
    load_matrix,
    parse_projection,
)
from qrange.config import DEFAULT_SEED, MAX_ITERS, RESTARTS, TOL
from qrange.models import FullPlane, InfiniteRadius
from qrange.services.semi_hilbert import build_aspace, cloud_qa, radius_qa

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("semihilbert", help="Sample W_{q,A}(M) or estimate w_{q,A}(M)")
    parser.add_argument("--input", type=Path, required=True, help="Document holding the single matrix M")
    parser.add_argument("--a", type=Path, required=True, help="Document holding the positive semidefinite A")
    add_common_arguments(parser, DEFAULT_SEED)
    parser.add_argument("--count", type=int, default=1000)
    parser.add_argument(
        "--kappa",
        type=float,
        default=0.0,
        help="Amplitude of the kernel component added to sampled x",
    )
    parser.add_argument("--radius", action="store_true", help="Estimate w_{q,A}(M) instead of sampling")
    parser.add_argument("--restarts", type=int, default=RESTARTS, help="(CLI > env:QRANGE_RESTARTS > default)")
    parser.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    parser.add_argument("--project", type=parse_projection, default=None)
    parser.set_defaults(handler=cmd_semihilbert)


def cmd_semihilbert(args: argparse.Namespace) -> int:
    """
    Args:
        args: parsed flags (input, a, q, count, seed, kappa, radius, restarts, format, out)

    Returns:
        Exit code 0

    Raises:
        CommandError: a FullPlane certificate was requested as CSV or SVG (exit 4)
        InfeasibleConstraintError: rank(A) <= 1 with |q| < 1
    """
    M = load_matrix(args.input)
    space = build_aspace(load_matrix(args.a))
    logger.info(
        f"semihilbert: n={space.n} rank(A)={space.rank} q={args.q} seed={args.seed} "
        f"{'radius' if args.radius else f'count={args.count} kappa={args.kappa}'}"
    )

    if args.radius:
        estimate = radius_qa(M, space, args.q, args.restarts, MAX_ITERS, TOL, args.seed)
        if isinstance(estimate, InfiniteRadius):
            logger.warning("semihilbert: M maps N(A) outside N(A); w_{q,A}(M) is infinite")
        emit_json(estimate, args.out)
        return EXIT_OK

    result = cloud_qa(M, space, args.q, args.count, args.seed, kappa=args.kappa)
    if isinstance(result, FullPlane):
        if args.format != "json":
            raise CommandError(
                EXIT_FULL_PLANE,
                "W_q,A(M) is the whole plane; rerun with --format json for the certificate",
            )
        logger.warning("semihilbert: W_q,A(M) is the whole plane; writing the certificate")
        emit_json(result, args.out)
        return EXIT_OK

    emit_cloud(result, args.format, args.out, args.project)
    return EXIT_OK
