"""
Multi-start ascent for the joint q-numerical radius

    Jtω_q(T) = sup { ‖(⟨T_i x, y⟩)_i‖₂ : (x, y) ∈ S_q }.

With u = q/|q|, s = √(1−|q|²) and y = conj(u)(|q|x + s z), z ⊥ x unit, the
value vector is u·(|q|b + s c) where b_i = x^H T_i x and c_i = z^H T_i x.
For fixed x the z-step is exact when d = 1 and a monotone minorize-maximize
iteration when d > 1; x moves by projected gradient with an adaptive step.
Every restart is advanced in lockstep as one (restarts, n) array.
"""

import logging

import numpy as np

from qrange.config import MAX_ITERS, RESTARTS, TOL
from qrange.models import (
    InfeasibleConstraintError,
    OperatorTuple,
    RadiusEstimate,
    SqPair,
    check_q,
    q_split,
)
from qrange.services.sq_sampler import sample_sq
from qrange.utils.rng import complex_normal, named_stream

logger = logging.getLogger(__name__)

INNER_ITERS = 30
MIN_STEP = 1e-10


def _normalize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(X, axis=-1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return X / safe, norms[..., 0]


def _project_off(Z: np.ndarray, X: np.ndarray) -> np.ndarray:
    return Z - np.sum(Z * X.conj(), axis=-1, keepdims=True) * X


def _best_z(
    parts: np.ndarray, X: np.ndarray, Z: np.ndarray, modulus: float, s: float
) -> np.ndarray:
    """Maximize ‖|q|b + s c(z)‖ over unit z ⊥ x, warm-started at Z"""
    W = np.einsum("inm,rm->rin", parts, X)
    b = np.einsum("rn,rin->ri", X.conj(), W)
    V = W - b[..., None] * X[:, None, :]

    if parts.shape[0] == 1:
        v, norms = _normalize(V[:, 0, :])
        bb = b[:, 0]
        phase = np.where(np.abs(bb) > 0, bb / np.where(np.abs(bb) > 0, np.abs(bb), 1.0), 1.0)
        candidate = np.conj(phase)[:, None] * v
        return np.where((norms > 0)[:, None], candidate, Z)

    for _ in range(INNER_ITERS):
        e = modulus * b + s * np.einsum("rn,rin->ri", Z.conj(), V)
        direction = np.einsum("ri,rin->rn", e.conj(), V)
        candidate, norms = _normalize(_project_off(direction, X))
        Z_next = np.where((norms > 0)[:, None], candidate, Z)
        if np.max(np.abs(Z_next - Z)) < 1e-15:
            Z = Z_next
            break
        Z = Z_next
    return Z


def _values(parts: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """(restarts, d) value vectors ⟨T_i x, y⟩"""
    return np.einsum("rn,inm,rm->ri", Y.conj(), parts, X)


def maximize_radius(
    T: OperatorTuple,
    q: complex,
    restarts: int = RESTARTS,
    max_iters: int = MAX_ITERS,
    tol: float = TOL,
    seed: int = 0,
    warm_starts: list[tuple[np.ndarray, np.ndarray | None]] | None = None,
) -> RadiusEstimate:
    """
    Lower bound on Jtω_q(T) with the pair attaining it.

    Args:
        T: operator tuple
        q: |q| <= 1
        restarts: random starting pairs drawn from S_|q| with the given seed
        max_iters: outer iterations per restart
        tol: relative improvement below which a restart counts as converged
        seed: start-point seed
        warm_starts: extra (x, z) starting pairs, z ⊥ x (z ignored when |q| = 1)

    Returns:
        RadiusEstimate whose value is recomputed from the returned witness.
    """
    q = check_q(q)
    modulus, s, phase = q_split(q)
    n = T.n
    if n < 2 and s > 0:
        raise InfeasibleConstraintError(f"S_q(C^{n}) is empty for |q|={abs(q):.6g} < 1")

    parts = T.parts
    start = sample_sq(n, modulus, restarts, seed)
    X = start.x.copy()
    Z = start.z.copy() if start.z is not None else np.zeros_like(X)
    if warm_starts:
        wx = np.stack([np.asarray(x, dtype=np.complex128) for x, _ in warm_starts])
        # a missing z is drawn at random and moved onto x⊥
        fill = complex_normal(named_stream(seed, "warm_start"), wx.shape)
        wz = np.stack(
            [
                fill[k] if z is None else np.asarray(z, dtype=np.complex128)
                for k, (_, z) in enumerate(warm_starts)
            ]
        )
        if s > 0:
            wz, _ = _normalize(_project_off(wz, wx))
        X = np.concatenate([X, wx])
        Z = np.concatenate([Z, wz])
    count = X.shape[0]

    def evaluate(X: np.ndarray, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if s > 0:
            Z = _best_z(parts, X, Z, modulus, s)
        Y = modulus * X + s * Z
        return Z, np.linalg.norm(_values(parts, X, Y), axis=-1)

    Z, value = evaluate(X, Z)
    step = np.full(count, 0.5)
    active = np.ones(count, dtype=bool)
    converged = np.zeros(count, dtype=bool)
    iterations = 0

    for iterations in range(1, max_iters + 1):
        if not active.any():
            iterations -= 1
            break
        Y = modulus * X + s * Z
        P = _values(parts, X, Y)
        TX = np.einsum("inm,rm->rin", parts, X)
        THY = np.einsum("imn,rm->rin", parts.conj(), Y)
        G = np.einsum("ri,rin->rn", P.conj() * modulus, TX) + np.einsum("ri,rin->rn", P, THY)
        G = G - np.real(np.sum(G * X.conj(), axis=-1, keepdims=True)) * X
        direction, gnorm = _normalize(G)

        flat = active & (gnorm == 0)
        converged |= flat
        active &= ~flat

        X_try, _ = _normalize(X + step[:, None] * direction)
        Z_try = Z
        if s > 0:
            Z_try, znorm = _normalize(_project_off(Z, X_try))
            Z_try = np.where((znorm > 0)[:, None], Z_try, Z)
        Z_try, value_try = evaluate(X_try, Z_try)

        accept = active & (value_try > value)
        gain = np.where(accept, value_try - value, 0.0)
        X = np.where(accept[:, None], X_try, X)
        Z = np.where(accept[:, None], Z_try, Z)
        value = np.where(accept, value_try, value)
        step = np.where(accept, np.minimum(2 * step, 1.0), step / 2)

        done = active & ((accept & (gain <= tol * value)) | (step < MIN_STEP))
        converged |= done
        active &= ~done

    best = int(np.argmax(value))
    x = X[best]
    if s > 0:
        z = np.conj(phase) * Z[best]
        y = np.conj(phase) * (modulus * x + s * Z[best])
    else:
        z = None
        y = np.conj(q) * x
    witness_value = float(np.linalg.norm(np.einsum("n,inm,m->i", y.conj(), parts, x)))

    if not converged[best]:
        logger.warning(
            f"radius search did not converge in {max_iters} iterations "
            f"(best value {witness_value:.6g})"
        )
    logger.debug(f"radius search: value={witness_value:.12g} restarts={count} iters={iterations}")

    return RadiusEstimate(
        value=witness_value,
        witness=SqPair(x=x, z=z, y=y, q=q),
        iterations=iterations,
        converged=bool(converged[best]),
        restarts=count,
    )
