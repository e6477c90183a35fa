"""
A-weighted structure for a positive semidefinite A: ⟨x, y⟩_A = ⟨Ax, y⟩.

Covers the A-adjoint A†M*A, the kernel-escape test, W_{q,A} clouds (with the
whole-plane certificate when M(N(A)) ⊄ N(A)), the q-A-numerical radius and
the triangle-equality diagnostic. Radii of kernel-preserving operators are
computed on the compressed problem M̃ = Λ^{1/2} V*MV Λ^{-1/2}, whose ambient
q-range equals W_{q,A}(M).
"""

import logging

import numpy as np

from qrange.config import KAPPA_SCHEDULE, MAX_ITERS, RANK_TOL, RESTARTS, SHARD_SIZE, TOL
from qrange.models import (
    ASpace,
    CloudMeta,
    Compression,
    DimensionMismatchError,
    FullPlane,
    InfeasibleConstraintError,
    InfiniteRadius,
    KernelEscapeError,
    MalformedInputError,
    NotAdjointableError,
    OperatorTuple,
    PointCloud,
    RadiusEstimate,
    SqPair,
    TriangleGap,
    as_matrix,
    check_q,
    q_split,
)
from qrange.services.radius_search import maximize_radius
from qrange.services.range_engine import pair_values
from qrange.services.sq_sampler import range_map, sample_sq, sample_sq_a

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10


def build_aspace(A: np.ndarray, tol: float = RANK_TOL) -> ASpace:
    """
    Eigendecomposition-based A^{1/2}, A†, A^{†/2}, range projection and bases.

    Eigenvalues below tol·λ_max count as zero. A diagonal A keeps the natural
    coordinate order, so A = I reproduces ambient computations exactly.

    Raises:
        MalformedInputError: A is not Hermitian or has an eigenvalue below −tol·λ_max
    """
    A = as_matrix(A)
    n = A.shape[0]
    asymmetry = float(np.linalg.norm(A - A.conj().T))
    if asymmetry > HERMITIAN_TOL * (1 + float(np.linalg.norm(A))):
        raise MalformedInputError(f"A is not Hermitian (‖A − A*‖_F = {asymmetry:.3e})")

    off_diagonal = A - np.diag(np.diag(A))
    if not np.any(off_diagonal):
        values = np.diag(A).real.copy()
        vectors = np.eye(n, dtype=np.complex128)
    else:
        values, vectors = np.linalg.eigh((A + A.conj().T) / 2)

    scale = max(float(np.max(np.abs(values))), 0.0)
    threshold = tol * scale
    if np.min(values) < -threshold:
        raise MalformedInputError(f"A is indefinite: eigenvalue {float(np.min(values)):.6g}")

    keep = values > threshold
    lam = values[keep]
    V = vectors[:, keep]
    K = vectors[:, ~keep]
    root = np.sqrt(lam)

    def assemble(weights: np.ndarray) -> np.ndarray:
        return (V * weights[None, :]) @ V.conj().T

    space = ASpace(
        A=A,
        sqrtA=assemble(root),
        pinvA=assemble(1 / lam),
        pinv_sqrt=assemble(1 / root),
        proj=assemble(np.ones_like(lam)),
        rank=int(keep.sum()),
        range_basis=V,
        kernel_basis=K,
        eigenvalues=lam,
        tol=tol,
    )
    logger.debug(f"build_aspace: n={n} rank={space.rank} lambda_max={scale:.6g}")
    return space


def _check_shape(M: np.ndarray, space: ASpace) -> np.ndarray:
    M = as_matrix(M)
    if M.shape != space.A.shape:
        raise DimensionMismatchError(f"M is {M.shape}, A is {space.A.shape}")
    return M


def a_inner(space: ASpace, x: np.ndarray, y: np.ndarray) -> complex:
    """⟨x, y⟩_A = ⟨Ax, y⟩, linear in x"""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != (space.n,) or y.shape != (space.n,):
        raise DimensionMismatchError(f"vectors must have shape ({space.n},)")
    return complex(np.vdot(y, space.A @ x))


def a_norm(space: ASpace, x: np.ndarray) -> float:
    return float(np.sqrt(max(a_inner(space, x, x).real, 0.0)))


def douglas_residual(M: np.ndarray, space: ASpace) -> tuple[float, float]:
    """(‖(I − P)M*A‖_F, ‖M*A‖_F)"""
    M = _check_shape(M, space)
    star_a = M.conj().T @ space.A
    escape = star_a - space.proj @ star_a
    return float(np.linalg.norm(escape)), float(np.linalg.norm(star_a))


def is_a_adjointable(M: np.ndarray, space: ASpace, tol: float = 1e-10) -> bool:
    """R(M*A) ⊆ R(A), tested as ‖(I − P)M*A‖_F <= tol(1 + ‖M*A‖_F)"""
    residual, scale = douglas_residual(M, space)
    return residual <= tol * (1 + scale)


def a_adjoint(M: np.ndarray, space: ASpace, tol: float = 1e-10) -> np.ndarray:
    """
    M^♯ = A†M*A, the reduced solution of AX = M*A.

    Raises:
        NotAdjointableError: the Douglas range condition fails
    """
    residual, scale = douglas_residual(M, space)
    if residual > tol * (1 + scale):
        raise NotAdjointableError(residual)
    M = as_matrix(M)
    return space.pinvA @ M.conj().T @ space.A


def kernel_leak(M: np.ndarray, space: ASpace) -> float:
    """max over kernel basis vectors k of ‖P M k‖"""
    M = _check_shape(M, space)
    if space.kernel_basis.shape[1] == 0:
        return 0.0
    leaked = space.proj @ M @ space.kernel_basis
    return float(np.max(np.linalg.norm(leaked, axis=0)))


def kernel_escape(M: np.ndarray, space: ASpace, tol: float = 1e-10) -> bool:
    """True iff M(N(A)) ⊄ N(A) beyond tol"""
    return kernel_leak(M, space) > tol


def compress_to_range(M: np.ndarray, space: ASpace) -> Compression:
    """A′ = V*AV, T′ = V*MV and the similarity M̃ = A′^{1/2} T′ A′^{-1/2}"""
    M = _check_shape(M, space)
    if space.rank == 0:
        raise InfeasibleConstraintError("A = 0 has an empty range")
    V = space.range_basis
    Aprime = V.conj().T @ space.A @ V
    Tprime = V.conj().T @ M @ V
    root = np.sqrt(space.eigenvalues)
    reduced = root[:, None] * Tprime / root[None, :]
    return Compression(Aprime=Aprime, Tprime=Tprime, basis=V, reduced=reduced)


def _require_rank(space: ASpace, q: complex) -> float:
    _, s, _ = q_split(q)
    if space.rank == 0 or (space.rank < 2 and s > 0):
        raise InfeasibleConstraintError(
            f"S_q,A is empty: rank(A)={space.rank} with |q|={abs(q):.6g}"
        )
    return s


def full_plane_certificate(
    M: np.ndarray, space: ASpace, q: complex, kappas=KAPPA_SCHEDULE
) -> FullPlane:
    """
    Pairs (κk + x₂, y₂) ∈ S_{q,A} with value κ‖PMk‖_A + ⟨Mx₂, y₂⟩_A.

    k is the unit kernel vector maximizing ‖PMk‖, y₂ = PMk/‖PMk‖_A and
    x₂ = q y₂ + √(1−|q|²) w with w A-unit and A-orthogonal to y₂.
    """
    M = _check_shape(M, space)
    q = check_q(q)
    s = _require_rank(space, q)
    K = space.kernel_basis
    if K.shape[1] == 0:
        raise ValueError("A has trivial kernel; W_q,A(M) is bounded")

    leaked = space.proj @ M @ K
    _, _, vh = np.linalg.svd(leaked)
    k = K @ vh[0].conj()
    r = space.proj @ M @ k
    y2 = r / a_norm(space, r)

    x2 = q * y2
    if s > 0:
        best, best_norm = None, 0.0
        for v in space.range_basis.T:
            w = v - a_inner(space, v, y2) * y2
            norm = a_norm(space, w)
            if norm > best_norm:
                best, best_norm = w, norm
        x2 = x2 + s * best / best_norm

    kappas = np.asarray(kappas, dtype=np.float64)
    values = np.array([a_inner(space, M @ (kappa * k + x2), y2) for kappa in kappas])
    residual = max(
        abs(a_norm(space, x2) - 1),
        abs(a_norm(space, y2) - 1),
        abs(a_inner(space, x2, y2) - q),
    )
    return FullPlane(
        q=q,
        kernel_vector=k,
        x_range=x2,
        y=y2,
        slope=a_norm(space, r),
        offset=a_inner(space, M @ x2, y2),
        kappas=kappas,
        values=values,
        residual=residual,
    )


def cloud_qa(
    M: np.ndarray,
    space: ASpace,
    q: complex,
    count: int,
    seed: int,
    kappa_schedule=KAPPA_SCHEDULE,
    kappa: float = 0.0,
    shard_size: int = SHARD_SIZE,
) -> PointCloud | FullPlane:
    """
    W_{q,A}(M): a FullPlane certificate under kernel escape, otherwise a cloud of
    ⟨Mx, y⟩_A over sample_sq_a pairs.

    Raises:
        InfeasibleConstraintError: rank(A) <= 1 with |q| < 1
    """
    M = _check_shape(M, space)
    q = check_q(q)
    _require_rank(space, q)
    if kernel_escape(M, space):
        logger.info(f"cloud_qa: kernel escape (leak {kernel_leak(M, space):.3e}); range is C")
        return full_plane_certificate(M, space, q, kappa_schedule)

    batch = sample_sq_a(space, q, count, seed, kappa=kappa, shard_size=shard_size)
    parts = (space.A @ M)[None, :, :]
    points = pair_values(parts, batch.x, batch.y)
    meta = CloudMeta(n=space.n, d=1, q=q, seed=seed, count=count, generator="qa")
    return PointCloud(points=points, meta=meta)


def _lift(estimate: RadiusEstimate, space: ASpace, value: float) -> RadiusEstimate:
    """Map a witness of the compressed problem back to A-unit vectors in C^n"""
    B = range_map(space)
    w = estimate.witness
    witness = SqPair(
        x=B @ w.x,
        z=None if w.z is None else B @ w.z,
        y=B @ w.y,
        q=w.q,
    )
    return estimate.model_copy(update={"witness": witness, "value": value})


def radius_qa(
    M: np.ndarray,
    space: ASpace,
    q: complex,
    restarts: int = RESTARTS,
    max_iters: int = MAX_ITERS,
    tol: float = TOL,
    seed: int = 0,
    warm_starts: list | None = None,
) -> RadiusEstimate | InfiniteRadius:
    """
    Lower bound on w_{q,A}(M), or InfiniteRadius under kernel escape.
    The search runs on the compressed operator M̃; for A = I it is radius_joint((M)).
    """
    M = _check_shape(M, space)
    q = check_q(q)
    _require_rank(space, q)
    if kernel_escape(M, space):
        return InfiniteRadius(certificate=full_plane_certificate(M, space, q))

    reduced = compress_to_range(M, space).reduced
    estimate = maximize_radius(
        OperatorTuple.of(reduced), q, restarts, max_iters, tol, seed, warm_starts
    )
    lifted = _lift(estimate, space, estimate.value)
    value = abs(a_inner(space, M @ lifted.witness.x, lifted.witness.y))
    return lifted.model_copy(update={"value": value})


def _reduced_pair_values(
    reduced: np.ndarray, X: np.ndarray, Y: np.ndarray
) -> np.ndarray:
    return pair_values(reduced[None, :, :], X, Y)[:, 0]


def triangle_equality_gap(
    Mt: np.ndarray,
    Ms: np.ndarray,
    space: ASpace,
    q: complex,
    restarts: int = RESTARTS,
    max_iters: int = MAX_ITERS,
    seed: int = 0,
    samples: int = 2000,
    tolerance: float = 1e-3,
) -> TriangleGap:
    """
    Diagnostic for w_{q,A}(T + S) = w_{q,A}(T) + w_{q,A}(S).

    gap = wT + wS − wSum. cross_sup is the largest ℜ(⟨y,Tx⟩_A⟨Sx,y⟩_A) found
    over the three optimizer witnesses and `samples` random pairs; equality is
    flagged when |cross_sup − wT·wS| <= tolerance·wT·wS.

    Raises:
        KernelEscapeError: either operand maps N(A) outside N(A)
    """
    Mt, Ms = _check_shape(Mt, space), _check_shape(Ms, space)
    q = check_q(q)
    _require_rank(space, q)
    for label, M in (("T", Mt), ("S", Ms)):
        if kernel_escape(M, space):
            raise KernelEscapeError(f"operand {label} maps N(A) outside N(A)")

    rt = compress_to_range(Mt, space).reduced
    rs = compress_to_range(Ms, space).reduced

    total = maximize_radius(OperatorTuple.of(rt + rs), q, restarts, max_iters, seed=seed)
    warm = [(total.witness.x, _phase_free_z(total, q))]
    wt = maximize_radius(OperatorTuple.of(rt), q, restarts, max_iters, seed=seed, warm_starts=warm)
    ws = maximize_radius(OperatorTuple.of(rs), q, restarts, max_iters, seed=seed, warm_starts=warm)

    batch = sample_sq(space.rank, q, samples, seed)
    X = np.concatenate([batch.x] + [e.witness.x[None] for e in (wt, ws, total)])
    Y = np.concatenate([batch.y] + [e.witness.y[None] for e in (wt, ws, total)])
    a = _reduced_pair_values(rt, X, Y)
    b = _reduced_pair_values(rs, X, Y)
    cross_sup = float(np.max(np.real(np.conj(a) * b)))

    product_ = wt.value * ws.value
    condition_gap = abs(cross_sup - product_)
    gap = wt.value + ws.value - total.value
    logger.info(
        f"triangle gap: wT={wt.value:.6g} wS={ws.value:.6g} wSum={total.value:.6g} "
        f"gap={gap:.3e} cross_sup={cross_sup:.6g}"
    )
    return TriangleGap(
        gap=gap,
        cross_sup=cross_sup,
        wT=wt.value,
        wS=ws.value,
        wSum=total.value,
        condition_gap=condition_gap,
        equality=condition_gap <= tolerance * product_,
    )


def _phase_free_z(estimate: RadiusEstimate, q: complex) -> np.ndarray | None:
    """Undo the q-phase on a witness z so it can warm-start another search"""
    z = estimate.witness.z
    if z is None:
        return None
    _, _, phase = q_split(q)
    return phase * z
