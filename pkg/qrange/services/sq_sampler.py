"""
Sampling the constraint sets

    S_q     = {(x, y) : ‖x‖ = ‖y‖ = 1, ⟨x, y⟩ = q}
    S_{q,A} = the same with ‖·‖_A and ⟨·,·⟩_A

through the parametrization y = q̄x + √(1−|q|²)z with z ⊥ x a unit vector.
The inner product is linear in the first slot: ⟨x, y⟩ = y^H x.

Coupling across q: the sampler draws an x stream and a raw z stream that
do not depend on q, and uses z = conj(q/|q|)·z_raw. The stream for e^{iθ}q is
then the stream for q with x unchanged and z replaced by e^{−iθ}z.
"""

import logging
from collections.abc import Iterator

import numpy as np

from qrange.config import SHARD_SIZE
from qrange.models import (
    ASpace,
    ConstraintViolationError,
    DimensionMismatchError,
    FieldMode,
    InfeasibleConstraintError,
    SqBatch,
    SqPair,
    check_q,
    check_seed,
    q_split,
)
from qrange.utils.rng import KERNEL_STREAM, shards, stream

logger = logging.getLogger(__name__)

# Input tolerance of pair_from_xz
PAIR_INPUT_TOL = 1e-10


def inner(x: np.ndarray, y: np.ndarray) -> complex:
    """⟨x, y⟩ = Σ x_k conj(y_k)"""
    return complex(np.vdot(y, x))


def row_inner(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise ⟨X_k, Y_k⟩ for (count, n) arrays"""
    return np.sum(X * Y.conj(), axis=-1)


def _normalize_rows(X: np.ndarray) -> np.ndarray:
    return X / np.linalg.norm(X, axis=-1, keepdims=True)


def _orthonormal_complement(X: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Project Z off X row-wise (twice, for accuracy) and normalize"""
    for _ in range(2):
        Z = Z - row_inner(Z, X)[:, None] * X
    return _normalize_rows(Z)


def _raw_draws(
    n: int, count: int, seed: int, mode: FieldMode, shard_size: int
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (x_raw, z_raw) Gaussian blocks shard by shard"""
    for shard, size in shards(count, shard_size):
        rng = stream(seed, shard)
        logger.debug(f"shard {shard}: {size} draws (n={n}, mode={mode})")
        if mode == "real":
            draws = rng.standard_normal((size, 2, n)).astype(np.complex128)
            yield draws[:, 0, :], draws[:, 1, :]
        else:
            draws = rng.standard_normal((size, 2, n, 2))
            gauss = draws[..., 0] + 1j * draws[..., 1]
            yield gauss[:, 0, :], gauss[:, 1, :]


def _check_mode_q(q: complex, mode: FieldMode) -> None:
    if mode not in ("complex", "real"):
        raise ValueError(f"unknown field mode {mode!r}")
    if mode == "real" and q.imag != 0:
        raise ConstraintViolationError("q real in real mode", abs(q.imag))


def sample_sphere(
    n: int, count: int, seed: int, mode: FieldMode = "complex", shard_size: int = SHARD_SIZE
) -> np.ndarray:
    """Unit vectors uniform on the sphere; identical to the x stream of sample_sq"""
    seed = check_seed(seed)
    blocks = [_normalize_rows(x) for x, _ in _raw_draws(n, count, seed, mode, shard_size)]
    return np.concatenate(blocks) if blocks else np.zeros((0, n), dtype=np.complex128)


def pair_from_xz(x: np.ndarray, z: np.ndarray | None, q: complex) -> SqPair:
    """
    Build (x, y) ∈ S_q with y = q̄x + √(1−|q|²)z.

    Raises:
        ConstraintViolationError: x or z not unit, or z not orthogonal to x
    """
    q = check_q(q)
    x = np.asarray(x, dtype=np.complex128)
    _, s, _ = q_split(q)

    residual = abs(np.linalg.norm(x) - 1)
    if residual > PAIR_INPUT_TOL:
        raise ConstraintViolationError("‖x‖ = 1", residual)

    if s == 0:
        return SqPair(x=x, z=None, y=np.conj(q) * x, q=q)

    if z is None:
        raise ConstraintViolationError("z required when |q| < 1", 1.0)
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != x.shape:
        raise DimensionMismatchError(f"x has shape {x.shape}, z has shape {z.shape}")
    residual = abs(np.linalg.norm(z) - 1)
    if residual > PAIR_INPUT_TOL:
        raise ConstraintViolationError("‖z‖ = 1", residual)
    residual = abs(inner(x, z))
    if residual > PAIR_INPUT_TOL:
        raise ConstraintViolationError("⟨x, z⟩ = 0", residual)

    return SqPair(x=x, z=z, y=np.conj(q) * x + s * z, q=q)


def _assemble(X: np.ndarray, Zhat: np.ndarray | None, q: complex) -> SqBatch:
    modulus, s, phase = q_split(q)
    if Zhat is None or s == 0:
        return SqBatch(x=X, z=None, y=np.conj(q) * X, q=q)
    Z = np.conj(phase) * Zhat
    Y = np.conj(phase) * (modulus * X + s * Zhat)
    return SqBatch(x=X, z=Z, y=Y, q=q)


def sample_sq(
    n: int,
    q: complex,
    count: int,
    seed: int,
    mode: FieldMode = "complex",
    shard_size: int = SHARD_SIZE,
) -> SqBatch:
    """
    Draw count pairs from S_q(ℂ^n) (or S_q(ℝ^n) in real mode).

    x is a normalized Gaussian; z is an independent Gaussian projected onto x⊥
    and normalized. Both streams are drawn even when |q| = 1, so the x stream
    never depends on q.

    Raises:
        InfeasibleConstraintError: n = 1 and |q| < 1
    """
    q = check_q(q)
    seed = check_seed(seed)
    _check_mode_q(q, mode)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    _, s, _ = q_split(q)
    if n < 2 and s > 0:
        raise InfeasibleConstraintError(f"S_q(C^{n}) is empty for |q|={abs(q):.6g} < 1")

    xs, zs = [], []
    for x_raw, z_raw in _raw_draws(n, count, seed, mode, shard_size):
        x = _normalize_rows(x_raw)
        xs.append(x)
        if s > 0:
            zs.append(_orthonormal_complement(x, z_raw))
    X = np.concatenate(xs)
    Zhat = np.concatenate(zs) if zs else None
    return _assemble(X, Zhat, q)


def swap(batch: SqBatch) -> SqBatch:
    """(x, y) ∈ S_q  ->  (y, x) ∈ S_{q̄}; z is recomputed for the swapped pair"""
    q = np.conj(batch.q)
    _, s, _ = q_split(q)
    if s == 0:
        return SqBatch(x=batch.y, z=None, y=batch.x, q=q, metric=batch.metric)
    Z = (batch.x - np.conj(q) * batch.y) / s
    return SqBatch(x=batch.y, z=Z, y=batch.x, q=q, metric=batch.metric)


def transport(batch: SqBatch, U: np.ndarray) -> SqBatch:
    """Apply a unitary to every vector of the batch: (x, y) -> (Ux, Uy)"""
    Ut = np.asarray(U).T
    return SqBatch(
        x=batch.x @ Ut,
        z=None if batch.z is None else batch.z @ Ut,
        y=batch.y @ Ut,
        q=batch.q,
    )


def range_map(space: ASpace) -> np.ndarray:
    """B = V Λ^{-1/2}: maps unit vectors of ℂ^rank onto A-unit vectors in range(A)"""
    return space.range_basis / np.sqrt(space.eigenvalues)[None, :]


def sample_sq_a(
    space: ASpace,
    q: complex,
    count: int,
    seed: int,
    kappa: float = 0.0,
    shard_size: int = SHARD_SIZE,
) -> SqBatch:
    """
    Draw count pairs from S_{q,A}.

    Pairs (û, ŷ) ∈ S_q(ℂ^rank) are mapped through B = V Λ^{-1/2}, which is an
    isometry from the ambient inner product onto ⟨·,·⟩_A. A kernel component
    κ·k (k a unit kernel vector from its own stream) is added to x; it does not
    change any A-constraint.

    Raises:
        InfeasibleConstraintError: rank(A) <= 1 and |q| < 1
    """
    q = check_q(q)
    _, s, _ = q_split(q)
    if space.rank == 0 or (space.rank < 2 and s > 0):
        raise InfeasibleConstraintError(
            f"S_q,A is empty: rank(A)={space.rank} with |q|={abs(q):.6g}"
        )

    reduced = sample_sq(space.rank, q, count, seed, shard_size=shard_size)
    B = range_map(space)
    X = reduced.x @ B.T
    Y = reduced.y @ B.T
    Z = None if reduced.z is None else reduced.z @ B.T

    kernel_dim = space.kernel_basis.shape[1]
    if kappa != 0 and kernel_dim > 0:
        rng = stream(check_seed(seed), KERNEL_STREAM)
        coeffs = rng.standard_normal((count, kernel_dim, 2))
        g = _normalize_rows(coeffs[..., 0] + 1j * coeffs[..., 1])
        X = X + kappa * (g @ space.kernel_basis.T)

    return SqBatch(x=X, z=Z, y=Y, q=q, metric=space.A)
