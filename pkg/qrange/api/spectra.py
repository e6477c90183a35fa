"""
`qrange spectra`: joint point spectrum of a commuting tuple.
"""

import argparse
import logging
from pathlib import Path

from qrange.api.common import EXIT_OK, emit_json, load_tuple, parse_complex
from qrange.config import DEFAULT_SEED
from qrange.services.range_engine import joint_point_spectrum, spectral_inclusion_check

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("spectra", help="Joint eigenvalues with witnesses")
    parser.add_argument("--input", type=Path, required=True, help="Tuple document (JSON)")
    parser.add_argument(
        "--q",
        type=parse_complex,
        default=None,
        help="Also check q·σ_p(T) ⊆ JtW_q(T) for this q",
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="(CLI > env:QRANGE_SEED > default)")
    parser.add_argument("--out", type=Path, default=None)
    parser.set_defaults(handler=cmd_spectra)


def cmd_spectra(args: argparse.Namespace) -> int:
    """
    Raises:
        NonCommutingError: the tuple does not commute
    """
    T = load_tuple(args.input)
    points = joint_point_spectrum(T)
    document = {
        "spectrum": [p.model_dump(mode="json") for p in points],
        "inclusion": None,
    }
    if args.q is not None:
        report = spectral_inclusion_check(T, args.q, seed=args.seed)
        logger.info(f"spectra: inclusion {report.status} (margin {report.margin:.3e})")
        document["inclusion"] = report.model_dump(mode="json")
    emit_json(document, args.out)
    return EXIT_OK
