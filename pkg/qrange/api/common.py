"""
Shared plumbing for the command handlers: argument parsing helpers, input
loaders, exit-code mapping and atomic output writers.

Every output file is staged as a temporary sibling and moved into place with
os.replace, so a failing command never leaves a partial file behind.
"""

import argparse
import contextlib
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ValidationError

from qrange.models import (
    CloudMeta,
    InfeasibleConstraintError,
    MalformedInputError,
    OperatorTuple,
    PointCloud,
    TupleDocument,
)
from qrange.utils.svg import render_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_FULL_PLANE = 4


class CommandError(Exception):
    """Raised by a handler to stop with a specific exit code"""

    def __init__(self, exit_code: int, detail: str):
        self.exit_code = exit_code
        self.detail = detail
        super().__init__(detail)


def exit_code_for(error: Exception) -> int:
    """
    Map a library error to the process exit code.

    Infeasible constraint sets exit with 3; every other validation problem
    (malformed documents, violated constraints, shape mismatches, non-commuting
    or non-adjointable operators, bad suite configs) exits with 2.
    """
    if isinstance(error, CommandError):
        return error.exit_code
    if isinstance(error, InfeasibleConstraintError):
        return EXIT_INFEASIBLE
    if isinstance(error, (ValidationError, ValueError)):
        return EXIT_INVALID
    return EXIT_FAILED_CHECKS


def parse_complex(text: str) -> complex:
    """Parse "re" or "re,im" into a complex number"""
    fields = text.split(",")
    if len(fields) > 2:
        raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")
    try:
        values = [float(f) for f in fields]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")
    return complex(values[0], values[1] if len(values) == 2 else 0.0)


def parse_projection(text: str) -> tuple[int, int]:
    """Parse "i,j" into two real column indices"""
    fields = text.split(",")
    try:
        i, j = (int(f) for f in fields)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'i,j', got {text!r}")
    return i, j


def load_tuple(path: Path) -> OperatorTuple:
    """
    Load a tuple document.

    Raises:
        MalformedInputError: the file is missing or fails validation
    """
    try:
        text = Path(path).read_bytes()
    except OSError as e:
        raise MalformedInputError(f"cannot read tuple document {path}: {e}") from e
    return TupleDocument.parse(text)


def load_matrix(path: Path) -> np.ndarray:
    """Load a single matrix stored as a tuple document with d = 1"""
    tuple_ = load_tuple(path)
    if tuple_.d != 1:
        raise MalformedInputError(f"{path}: expected one matrix, got a {tuple_.d}-tuple")
    return np.array(tuple_.parts[0])


def write_files(files: dict[Path, str]) -> None:
    """Stage every file first, then move them all into place"""
    staged: list[tuple[str, Path]] = []
    try:
        for path, text in files.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            staged.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            with contextlib.suppress(FileNotFoundError):
                os.unlink(tmp)


def sidecar_path(csv_path: Path) -> Path:
    """cloud.csv -> cloud.meta.json"""
    return Path(csv_path).with_suffix(".meta.json")


def cloud_csv(cloud: PointCloud) -> str:
    header = ",".join(f"re_{i},im_{i}" for i in range(1, cloud.d + 1))
    buffer = io.StringIO()
    np.savetxt(buffer, cloud.real_view(), fmt="%.17g", delimiter=",", header=header, comments="")
    return buffer.getvalue()


def load_cloud(csv_path: Path) -> PointCloud:
    """Reload a cloud written by write_cloud_csv; values come back bit-exact"""
    meta = CloudMeta.model_validate_json(sidecar_path(csv_path).read_text(encoding="utf-8"))
    rows = np.loadtxt(csv_path, delimiter=",", skiprows=1, dtype=np.float64, ndmin=2)
    rows = rows.reshape(meta.count, 2 * meta.d)
    return PointCloud(points=rows[:, 0::2] + 1j * rows[:, 1::2], meta=meta)


def dump_json(document: Any) -> str:
    if isinstance(document, BaseModel):
        document = document.model_dump(mode="json")
    return json.dumps(document, indent=2) + "\n"


def emit_json(document: Any, out: Path | None) -> None:
    """Write a JSON document to `out`, or to stdout when no path was given"""
    text = dump_json(document)
    if out is None:
        print(text, end="")
        return
    write_files({Path(out): text})
    logger.info(f"wrote {out}")


def emit_cloud(cloud: PointCloud, fmt: str, out: Path | None, project: tuple[int, int] | None) -> None:
    """
    Write a cloud as CSV plus sidecar metadata, as one JSON document, or as an
    SVG scatter with its hull.

    Raises:
        CommandError: CSV and SVG need an output path
    """
    if fmt == "json":
        emit_json(cloud, out)
        return
    if out is None:
        raise CommandError(EXIT_INVALID, f"--out is required for --format {fmt}")
    out = Path(out)
    if fmt == "csv":
        write_files({out: cloud_csv(cloud), sidecar_path(out): dump_json(cloud.meta)})
        logger.info(f"wrote {cloud.count} points to {out} (metadata in {sidecar_path(out)})")
    elif fmt == "svg":
        write_files({out: render_svg(cloud, project)})
        logger.info(f"wrote SVG scatter of {cloud.count} points to {out}")
    else:
        raise CommandError(EXIT_INVALID, f"unsupported format {fmt!r}")


def add_common_arguments(parser: argparse.ArgumentParser, default_seed: int) -> None:
    """--q, --seed and --out shared by the range commands"""
    parser.add_argument("--q", type=parse_complex, required=True, help="q as 're' or 're,im' with |q| <= 1")
    parser.add_argument(
        "--seed",
        type=int,
        default=default_seed,
        help="Seed of the sample streams (CLI > env:QRANGE_SEED > default)",
    )
    parser.add_argument("--out", type=Path, default=None, help="Output path (stdout for JSON when omitted)")
