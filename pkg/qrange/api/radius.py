"""
`qrange radius`: estimate the joint q-numerical radius of a tuple.
"""

import argparse
import logging
from pathlib import Path

from qrange.api.common import EXIT_OK, add_common_arguments, emit_json, load_tuple
from qrange.config import DEFAULT_SEED, MAX_ITERS, RESTARTS, TOL
from qrange.models import OperatorTuple
from qrange.services.range_engine import radius_joint, sandwich_bounds

logger = logging.getLogger(__name__)

# slack allowed above the upper bound ‖T‖ before the estimate is clipped
UPPER_SLACK = 1e-10


def register(subparsers) -> None:
    parser = subparsers.add_parser("radius", help="Estimate Jtω_q(T) with a witness pair")
    parser.add_argument("--input", type=Path, required=True, help="Tuple document (JSON)")
    add_common_arguments(parser, DEFAULT_SEED)
    parser.add_argument(
        "--restarts",
        type=int,
        default=RESTARTS,
        help="Optimizer restarts (CLI > env:QRANGE_RESTARTS > default)",
    )
    parser.add_argument(
        "--max-iters",
        type=int,
        default=MAX_ITERS,
        help="Iterations per restart (CLI > env:QRANGE_MAX_ITERS > default)",
    )
    parser.set_defaults(handler=cmd_radius)


def radius_document(T: OperatorTuple, q: complex, restarts: int, max_iters: int, seed: int) -> dict:
    """
    Estimate plus, for real q in (0, 1), the sandwich bounds.

    Returns:
        Dictionary with value, converged, iterations, restarts, witness and bounds
        (None unless q is real and strictly between 0 and 1)
    """
    estimate = radius_joint(T, q, restarts, max_iters, TOL, seed)
    document = estimate.model_dump(mode="json")
    document["bounds"] = None
    if q.imag == 0 and 0 < q.real < 1:
        bounds = sandwich_bounds(T, q.real)
        document["bounds"] = bounds.model_dump(mode="json")
        document["value"] = min(estimate.value, bounds.upper + UPPER_SLACK)
    if not estimate.converged:
        logger.warning(f"radius: optimizer did not converge within {max_iters} iterations")
    return document


def cmd_radius(args: argparse.Namespace) -> int:
    """
    Args:
        args: parsed flags (input, q, seed, restarts, max_iters, out)

    Returns:
        Exit code 0

    Raises:
        InfeasibleConstraintError: n = 1 with |q| < 1
    """
    T = load_tuple(args.input)
    logger.info(f"radius: {args.input} (d={T.d}, n={T.n}) q={args.q} restarts={args.restarts} seed={args.seed}")
    document = radius_document(T, args.q, args.restarts, args.max_iters, args.seed)
    logger.info(f"radius: value {document['value']:.12g}")
    emit_json(document, args.out)
    return EXIT_OK
