"""
Operator calculus on matrix tuples: adjoints, real/imaginary parts, the
tuple norm, the classical numerical radius and commutation tests.
"""

import logging

import numpy as np
from scipy.optimize import minimize_scalar

from qrange.config import ANGLES
from qrange.models import OperatorTuple, as_matrix

logger = logging.getLogger(__name__)

# Default Frobenius tolerance for commutation and Hermitian checks
FROBENIUS_TOL = 1e-10


def adjoint_tuple(T: OperatorTuple) -> OperatorTuple:
    """T* = (T_1*, ..., T_d*)"""
    return OperatorTuple(parts=np.conj(np.transpose(T.parts, (0, 2, 1))))


def real_imag_parts(T: OperatorTuple) -> tuple[OperatorTuple, OperatorTuple]:
    """Return (ℜ(T), ℑ(T)) with ℜ(T) = (T + T*)/2 and ℑ(T) = (T - T*)/2i"""
    star = np.conj(np.transpose(T.parts, (0, 2, 1)))
    real = (T.parts + star) / 2
    imag = (T.parts - star) / 2j
    return OperatorTuple(parts=real), OperatorTuple(parts=imag)


def tuple_norm(T: OperatorTuple) -> float:
    """sup_{‖x‖=1} (Σ‖T_i x‖²)^{1/2}, the top singular value of the stacked (dn)×n matrix"""
    stacked = T.parts.reshape(T.d * T.n, T.n)
    return float(np.linalg.norm(stacked, 2))


def operator_norm(M: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(M), 2))


def hermitian_residual(M: np.ndarray) -> float:
    M = np.asarray(M)
    return float(np.linalg.norm(M - M.conj().T))


def _top_eigenvalue(M: np.ndarray, theta: float) -> float:
    rotated = np.exp(1j * theta) * M
    return float(np.linalg.eigvalsh((rotated + rotated.conj().T) / 2)[-1])


def classical_radius(M: np.ndarray, angles: int = ANGLES, refine: bool = False) -> float:
    """
    Numerical radius ω(M) = max_θ λ_max(ℜ(e^{iθ}M)) over a uniform θ grid.

    Args:
        M: square complex matrix
        angles: grid size, at least 16
        refine: polish the best grid cell with a golden-section search

    Returns:
        The grid maximum (a lower bound on ω(M)); with refine=True, the larger of
        the grid maximum and the refined value.
    """
    M = as_matrix(M)
    if angles < 16:
        raise ValueError(f"classical_radius needs at least 16 angles, got {angles}")

    thetas = 2 * np.pi * np.arange(angles) / angles
    rotated = np.exp(1j * thetas)[:, None, None] * M[None, :, :]
    hermitian = (rotated + np.conj(np.transpose(rotated, (0, 2, 1)))) / 2
    tops = np.linalg.eigvalsh(hermitian)[:, -1]
    best = int(np.argmax(tops))
    value = float(tops[best])

    if refine:
        step = 2 * np.pi / angles
        center = thetas[best]
        try:
            result = minimize_scalar(
                lambda t: -_top_eigenvalue(M, t),
                bracket=(center - step, center, center + step),
                method="golden",
            )
            value = max(value, -float(result.fun))
        except ValueError:
            # flat neighbourhood: the grid value is already optimal to rounding
            logger.debug("golden refinement skipped: bracket is not strictly unimodal")

    return max(value, 0.0)


def commutator_residual(T: OperatorTuple) -> float:
    """max_{i<j} ‖T_iT_j − T_jT_i‖_F (0 for d = 1)"""
    worst = 0.0
    for i in range(T.d):
        for j in range(i + 1, T.d):
            a, b = T.parts[i], T.parts[j]
            worst = max(worst, float(np.linalg.norm(a @ b - b @ a)))
    return worst


def commutes(T: OperatorTuple, tol: float = FROBENIUS_TOL) -> bool:
    if not tol > 0:
        raise ValueError(f"commutation tolerance must be positive, got {tol}")
    return commutator_residual(T) <= tol
