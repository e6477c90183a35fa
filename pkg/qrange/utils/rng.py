"""
Seeded random streams and random test instances.

Every stream is derived from a user seed through numpy's SeedSequence, so
identical seeds give bit-identical output and sub-streams never overlap.
"""

import zlib
from collections.abc import Iterator

import numpy as np
from scipy.linalg import qr

from qrange.config import SHARD_SIZE

# spawn_key slot reserved for the kernel-amplitude stream of A-constrained sampling
KERNEL_STREAM = 2**31 - 1
# spawn_key slot for the boundary phases of disk-union clouds
PHASE_STREAM = 2**31 - 2


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (seed, key...)"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def named_stream(seed: int, name: str) -> np.random.Generator:
    """Generator keyed by a stable hash of name; used per verify check"""
    return stream(seed, zlib.crc32(name.encode()))


def shards(count: int, shard_size: int = SHARD_SIZE) -> Iterator[tuple[int, int]]:
    """Yield (shard_index, size) covering count samples in index order"""
    index = 0
    remaining = count
    while remaining > 0:
        size = min(shard_size, remaining)
        yield index, size
        index += 1
        remaining -= size


def complex_normal(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    draws = rng.standard_normal(shape + (2,))
    return (draws[..., 0] + 1j * draws[..., 1]) / np.sqrt(2)


def random_matrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Complex Ginibre matrix"""
    return scale * complex_normal(rng, (n, n))


def random_parts(rng: np.random.Generator, d: int, n: int, scale: float = 1.0) -> np.ndarray:
    return scale * complex_normal(rng, (d, n, n))


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """
    Haar-random unitary: QR of a Ginibre matrix with the phases of diag(R)
    moved into Q.
    """
    z = complex_normal(rng, (n, n))
    q, r = qr(z)
    d = np.diag(r)
    ph = d / np.abs(d)
    return q * ph


def random_psd(rng: np.random.Generator, n: int, rank: int) -> np.ndarray:
    """Positive semidefinite matrix of the given rank with eigenvalues in [0.5, 2]"""
    u = haar_unitary(rng, n)
    values = np.zeros(n)
    values[:rank] = rng.uniform(0.5, 2.0, size=rank)
    a = (u * values) @ u.conj().T
    return (a + a.conj().T) / 2


def random_commuting_parts(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    """
    Commuting tuple p_i(U R U*) with R upper triangular and p_i random cubic
    polynomials; the family is simultaneously triangularizable.
    """
    r = np.triu(complex_normal(rng, (n, n)))
    u = haar_unitary(rng, n)
    base = u @ r @ u.conj().T
    powers = [np.eye(n, dtype=np.complex128), base, base @ base, base @ base @ base]
    parts = []
    for _ in range(d):
        coeffs = complex_normal(rng, (4,))
        parts.append(sum(c * p for c, p in zip(coeffs, powers)))
    return np.stack(parts)
