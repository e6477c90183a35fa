"""
qrange runtime configuration

Every setting is a module-level constant read once from the environment.
Command-line flags take precedence over these values, which take precedence
over the built-in defaults (CLI > env > default).
"""

import logging
import os


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


LOG_LEVEL = os.getenv("QRANGE_LOG_LEVEL", "INFO").upper()
if not isinstance(logging.getLevelName(LOG_LEVEL), int):
    raise ValueError(f"QRANGE_LOG_LEVEL is not a logging level: {LOG_LEVEL!r}")

DEFAULT_SEED = _env_int("QRANGE_SEED", 0)
if DEFAULT_SEED >= 2**64:
    raise ValueError("QRANGE_SEED must fit in 64 bits")

# Samples drawn per sub-seed; shards are merged in index order
SHARD_SIZE = _env_int("QRANGE_SHARD_SIZE", 4096, minimum=1)

# Radius optimizer
RESTARTS = _env_int("QRANGE_RESTARTS", 16, minimum=1)
MAX_ITERS = _env_int("QRANGE_MAX_ITERS", 500, minimum=1)
TOL = _env_float("QRANGE_TOL", 1e-9)

# Classical numerical radius theta grid
ANGLES = _env_int("QRANGE_ANGLES", 2048, minimum=16)

# Relative eigenvalue threshold deciding rank(A)
RANK_TOL = _env_float("QRANGE_RANK_TOL", 1e-10)

# Kernel amplitudes used to certify an unbounded q-A-numerical range
KAPPA_SCHEDULE = tuple(10.0**k for k in range(9))
