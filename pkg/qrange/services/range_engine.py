"""
Point clouds and radius estimates for W_q, JtW_q, the Tsing disk family,
the joint point spectrum, the C-numerical range and the block-matrix bounds.
"""

import logging
from itertools import product

import numpy as np

from qrange.config import ANGLES, MAX_ITERS, RESTARTS, SHARD_SIZE, TOL
from qrange.models import (
    BlockBounds,
    CloudMeta,
    ConstraintViolationError,
    DimensionMismatchError,
    Disk,
    FieldMode,
    InfeasibleConstraintError,
    NonCommutingError,
    OperatorTuple,
    PointCloud,
    RadiusEstimate,
    Report,
    SandwichBounds,
    SpectrumPoint,
    SqBatch,
    as_matrix,
    check_q,
    check_seed,
    q_split,
)
from qrange.services.core_model import (
    classical_radius,
    commutator_residual,
    operator_norm,
    tuple_norm,
)
from qrange.services.radius_search import maximize_radius
from qrange.services.sq_sampler import sample_sphere, sample_sq
from qrange.utils.rng import PHASE_STREAM, haar_unitary, shards, stream

logger = logging.getLogger(__name__)


def pair_values(parts: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """(count, d) array of ⟨T_i x_k, y_k⟩ = y_k^H T_i x_k"""
    return np.einsum("kn,inm,km->ki", Y.conj(), parts, X)


def values_at(T: OperatorTuple, batch: SqBatch) -> np.ndarray:
    if batch.n != T.n:
        raise DimensionMismatchError(f"tuple acts on C^{T.n}, pairs live in C^{batch.n}")
    return pair_values(T.parts, batch.x, batch.y)


def _cloud(points: np.ndarray, n: int, q: complex, seed: int, generator: str) -> PointCloud:
    meta = CloudMeta(n=n, d=points.shape[1], q=q, seed=seed, count=points.shape[0], generator=generator)
    return PointCloud(points=points, meta=meta)


def cloud_joint(
    T: OperatorTuple,
    q: complex,
    count: int,
    seed: int,
    mode: FieldMode = "complex",
    shard_size: int = SHARD_SIZE,
) -> PointCloud:
    """Sample JtW_q(T): value vectors (⟨T_1x,y⟩, ..., ⟨T_dx,y⟩) over sampled pairs of S_q"""
    batch = sample_sq(T.n, q, count, seed, mode=mode, shard_size=shard_size)
    logger.info(f"cloud_joint: d={T.d} n={T.n} q={complex(q)} count={count} seed={seed}")
    return _cloud(values_at(T, batch), T.n, batch.q, seed, "joint")


def cloud_single(
    M: np.ndarray,
    q: complex,
    count: int,
    seed: int,
    mode: FieldMode = "complex",
    shard_size: int = SHARD_SIZE,
) -> PointCloud:
    """Sample W_q(M); same stream and values as cloud_joint of the 1-tuple (M)"""
    cloud = cloud_joint(OperatorTuple.of(as_matrix(M)), q, count, seed, mode, shard_size)
    return cloud.model_copy(update={"meta": cloud.meta.model_copy(update={"generator": "single"})})


def tsing_disks(
    M: np.ndarray,
    q: complex,
    x_count: int,
    seed: int,
    center: str = "corrected",
) -> list[Disk]:
    """
    For each sampled unit x, the disk {⟨Mx, y⟩ : (x, y) ∈ S_q}: center q⟨Mx,x⟩,
    radius √(1−|q|²)(‖Mx‖² − |⟨Mx,x⟩|²)^{1/2}.

    center="printed" uses ⟨Mx,x⟩ as the center instead; the x samples are the
    x stream of sample_sq for the same seed.
    """
    M = as_matrix(M)
    q = check_q(q)
    _, s, _ = q_split(q)
    X = sample_sphere(M.shape[0], x_count, seed)
    MX = X @ M.T
    numerical = np.sum(MX * X.conj(), axis=1)
    spread = np.sqrt(np.maximum(np.sum(np.abs(MX) ** 2, axis=1) - np.abs(numerical) ** 2, 0.0))
    if center == "corrected":
        centers = q * numerical
    elif center == "printed":
        centers = numerical
    else:
        raise ValueError(f"unknown disk center {center!r}")
    return [Disk(center=c, radius=s * r) for c, r in zip(centers, spread)]


def disk_union_cloud(
    disks: list[Disk], seed: int, n: int, q: complex, generator: str = "disk_union"
) -> PointCloud:
    """One point per disk, on its boundary circle at an independent uniform phase"""
    rng = stream(check_seed(seed), PHASE_STREAM)
    phases = np.exp(2j * np.pi * rng.random(len(disks)))
    centers = np.array([d.center for d in disks], dtype=np.complex128)
    radii = np.array([d.radius for d in disks])
    return _cloud((centers + radii * phases)[:, None], n, q, seed, generator)


def radius_joint(
    T: OperatorTuple,
    q: complex,
    restarts: int = RESTARTS,
    max_iters: int = MAX_ITERS,
    tol: float = TOL,
    seed: int = 0,
    warm_starts: list | None = None,
) -> RadiusEstimate:
    """Lower bound on Jtω_q(T); see radius_search.maximize_radius"""
    return maximize_radius(T, q, restarts, max_iters, tol, seed, warm_starts)


def sandwich_bounds(T: OperatorTuple, q: float) -> SandwichBounds:
    """
    Bounds q/(2√d(2−q²))‖T‖ <= q/(2√d)‖T‖ <= Jtω_q(T) <= ‖T‖ for real q ∈ (0, 1).
    The first is the originally printed constant, the second the corrected one.
    """
    q_value = complex(q)
    if q_value.imag != 0 or not 0 < q_value.real < 1:
        raise ConstraintViolationError("q real in (0, 1)", abs(q_value))
    qr = q_value.real
    norm = tuple_norm(T)
    root_d = np.sqrt(T.d)
    return SandwichBounds(
        paper_lower=qr / (2 * root_d * (2 - qr * qr)) * norm,
        corrected_lower=qr / (2 * root_d) * norm,
        upper=norm,
    )


def apply_affine(T: OperatorTuple, alpha: complex, beta: complex) -> OperatorTuple:
    """(αT_i + βI)_i"""
    identity = np.eye(T.n, dtype=np.complex128)
    return OperatorTuple(parts=alpha * T.parts + beta * identity[None, :, :])


def _default_spectrum_tol(T: OperatorTuple) -> float:
    return 1e-8 * (1 + max(operator_norm(p) for p in T.parts))


def joint_point_spectrum(T: OperatorTuple, tol: float | None = None) -> list[SpectrumPoint]:
    """
    σ_p(T) for a commuting tuple: ξ with ∩ N(T_i − ξ_i I) ≠ {0}.

    Candidates are σ(T_1) × ... × σ(T_d); ξ is kept when the smallest singular
    value of the stacked (T_i − ξ_i I) is below tol, with the matching right
    singular vector as witness. Accepted ξ are then polished to the Rayleigh
    quotients ξ_i = w^H T_i w. In finite dimension this also serves σ_ap.

    Raises:
        NonCommutingError: the tuple does not commute to 1e-8
    """
    residual = commutator_residual(T)
    if residual > 1e-8:
        raise NonCommutingError(residual)
    if T.n > 64:
        raise ValueError(f"joint_point_spectrum supports n <= 64, got {T.n}")
    tol = _default_spectrum_tol(T) if tol is None else tol

    n = T.n
    identity = np.eye(n, dtype=np.complex128)
    spectra = [np.linalg.eigvals(p) for p in T.parts]
    found: list[SpectrumPoint] = []
    for candidate in product(*spectra):
        xi = np.array(candidate, dtype=np.complex128)
        stacked = (T.parts - xi[:, None, None] * identity[None]).reshape(T.d * n, n)
        _, sigma, vh = np.linalg.svd(stacked)
        if sigma[-1] >= tol:
            continue
        w = vh[-1].conj()
        xi = np.einsum("n,inm,m->i", w.conj(), T.parts, w)
        if any(np.max(np.abs(p.xi - xi)) <= np.sqrt(tol) for p in found):
            continue
        worst = float(np.max(np.linalg.norm(T.parts @ w - xi[:, None] * w[None, :], axis=1)))
        found.append(SpectrumPoint(xi=xi, witness=w, residual=worst))

    logger.info(f"joint_point_spectrum: {len(found)} joint eigenvalues (d={T.d}, n={n})")
    return found


def spectral_inclusion_check(
    T: OperatorTuple, q: complex, tol: float = 1e-10, seed: int = 0
) -> Report:
    """
    qσ_p(T) ⊆ JtW_q(T): for each joint eigenvalue ξ with witness x, the pair
    y = q̄x + √(1−|q|²)z (z a random unit vector ⊥ x) has value vector qξ.
    """
    q = check_q(q)
    _, s, _ = q_split(q)
    if T.n < 2 and s > 0:
        raise InfeasibleConstraintError(f"S_q(C^{T.n}) is empty for |q|={abs(q):.6g} < 1")
    points = joint_point_spectrum(T)
    rng = stream(check_seed(seed), 0)
    worst = 0.0
    worst_xi = None
    for point in points:
        x = point.witness
        y = np.conj(q) * x
        if s > 0:
            g = rng.standard_normal((T.n, 2)) @ np.array([1, 1j])
            z = g - np.vdot(x, g) * x
            z /= np.linalg.norm(z)
            y = y + s * z
        value = np.einsum("n,inm,m->i", y.conj(), T.parts, x)
        residual = float(np.linalg.norm(value - q * point.xi))
        if residual >= worst:
            worst, worst_xi = residual, point.xi
    witnesses = None
    if worst_xi is not None:
        witnesses = {"xi": [[v.real, v.imag] for v in worst_xi], "residual": worst}
    return Report.judge(
        "spectral.inclusion",
        margin=-worst,
        tolerance=tol,
        seed=seed,
        samples=len(points),
        details=f"q·σ_p(T) ⊆ JtW_q(T): {len(points)} joint eigenvalues, max residual {worst:.3e}",
        witnesses=witnesses,
    )


def q_to_c_matrix(q: complex, n: int) -> np.ndarray:
    """C = [[q, √(1−|q|²)], [0, 0]] ⊕ 0_{n−2}; rank one with trace q"""
    q = check_q(q)
    if n < 2:
        raise ConstraintViolationError("n >= 2", 2 - n)
    _, s, _ = q_split(q)
    C = np.zeros((n, n), dtype=np.complex128)
    C[0, 0] = q
    C[0, 1] = s
    return C


def c_matrix_parameters(C: np.ndarray) -> tuple[complex, complex]:
    """
    For rank-one C, JtW_C(T) = μ·JtW_q(T) with μ = phase(tr C)·‖C‖_F and
    q = |tr C| / ‖C‖_F (phase taken as 1 when tr C = 0).
    """
    C = as_matrix(C)
    sigma = np.linalg.svd(C, compute_uv=False)
    rank = int(np.sum(sigma > 1e-10 * sigma[0])) if sigma[0] > 0 else 0
    if rank != 1:
        raise ConstraintViolationError("rank(C) = 1", rank)
    frob = float(np.linalg.norm(C))
    trace = complex(np.trace(C))
    phase = trace / abs(trace) if trace != 0 else 1 + 0j
    return phase * frob, complex(min(abs(trace) / frob, 1.0))


def c_range_cloud(T: OperatorTuple, C: np.ndarray, count: int, seed: int) -> PointCloud:
    """Sample JtW_C(T) = {(tr(C U*T_iU))_i : U unitary} over Haar-random U"""
    C = as_matrix(C)
    if C.shape[0] != T.n:
        raise DimensionMismatchError(f"C is {C.shape[0]}x{C.shape[0]}, tuple acts on C^{T.n}")
    seed = check_seed(seed)
    blocks = []
    for shard, size in shards(count):
        rng = stream(seed, shard)
        U = np.stack([haar_unitary(rng, T.n) for _ in range(size)])
        blocks.append(np.einsum("da,kba,ibc,kcd->ki", C, U.conj(), T.parts, U, optimize=True))
    points = np.concatenate(blocks)
    return _cloud(points, T.n, complex(np.trace(C)), seed, "c_range")


def assemble_block(
    P: OperatorTuple, Q: OperatorTuple, R: OperatorTuple, S: OperatorTuple
) -> OperatorTuple:
    """T_i = [[P_i, Q_i], [R_i, S_i]]"""
    shapes = {P.parts.shape, Q.parts.shape, R.parts.shape, S.parts.shape}
    if len(shapes) != 1:
        raise DimensionMismatchError(f"block tuples differ in shape: {sorted(shapes)}")
    top = np.concatenate([P.parts, Q.parts], axis=2)
    bottom = np.concatenate([R.parts, S.parts], axis=2)
    return OperatorTuple(parts=np.concatenate([top, bottom], axis=1))


def _embed_witness(estimate: RadiusEstimate, n: int, lower_block: bool) -> tuple:
    """Lift a witness of P (upper-left) or S (lower-right) into C^{2n}"""
    pad = np.zeros(n, dtype=np.complex128)
    x, z = estimate.witness.x, estimate.witness.z
    if lower_block:
        return np.concatenate([pad, x]), None if z is None else np.concatenate([pad, z])
    return np.concatenate([x, pad]), None if z is None else np.concatenate([z, pad])


def block_lower(
    P: OperatorTuple,
    S: OperatorTuple,
    q: complex,
    restarts: int = RESTARTS,
    max_iters: int = MAX_ITERS,
    seed: int = 0,
) -> tuple[float, list]:
    """max(Jtω_q(P), Jtω_q(S)) with the witnesses lifted to the block space"""
    wp = radius_joint(P, q, restarts, max_iters, seed=seed)
    ws = radius_joint(S, q, restarts, max_iters, seed=seed)
    lifts = [_embed_witness(wp, P.n, False), _embed_witness(ws, S.n, True)]
    return max(wp.value, ws.value), lifts


def block_bounds(
    P: OperatorTuple,
    Q: OperatorTuple,
    R: OperatorTuple,
    S: OperatorTuple,
    q: complex,
    restarts: int = RESTARTS,
    max_iters: int = MAX_ITERS,
    seed: int = 0,
    angles: int = ANGLES,
) -> BlockBounds:
    """
    Bounds on Jtω_q of T_i = [[P_i, Q_i], [R_i, S_i]]:

        lower   = max(Jtω_q(P), Jtω_q(S))
        upper^2 = Σ_i ( |q|/2 (ω(P_i) + ω(S_i) + √((ω(P_i) − ω(S_i))² + (‖R_i‖ + ‖Q_i‖)²))
                        + √(1−|q|²) (‖P_i‖² + ‖Q_i‖² + ‖R_i‖² + ‖S_i‖²)^{1/2} )²
    """
    assemble_block(P, Q, R, S)
    q = check_q(q)
    modulus, s, _ = q_split(q)
    upper_squared = 0.0
    for i in range(P.d):
        wp = classical_radius(P.parts[i], angles, refine=True)
        ws = classical_radius(S.parts[i], angles, refine=True)
        nq, nr = operator_norm(Q.parts[i]), operator_norm(R.parts[i])
        norms = [operator_norm(m.parts[i]) for m in (P, Q, R, S)]
        term = modulus / 2 * (wp + ws + np.sqrt((wp - ws) ** 2 + (nr + nq) ** 2))
        term += s * np.sqrt(sum(v * v for v in norms))
        upper_squared += term * term
    lower, _ = block_lower(P, S, q, restarts, max_iters, seed)
    return BlockBounds(
        case="general",
        lower=lower,
        upper=float(np.sqrt(upper_squared)),
        upper_squared=float(upper_squared),
    )


def _is_zero(T: OperatorTuple) -> bool:
    return not np.any(T.parts)


def block_remark_bounds(
    P: OperatorTuple,
    Q: OperatorTuple,
    R: OperatorTuple,
    S: OperatorTuple,
    q: complex,
    case: str,
    restarts: int = RESTARTS,
    max_iters: int = MAX_ITERS,
    seed: int = 0,
    angles: int = ANGLES,
) -> BlockBounds:
    """
    Closed-form specializations of the block bound.

    case:
        "row"        R = S = 0; lower Jtω_q(P)
        "diagonal"   Q = R = 0; lower max(Jtω_q(P), Jtω_q(S))
        "antidiagonal"  P = S = 0; lower 0
        "symmetric"  S = ±P, R = ±Q; lower Jtω_q(P)
    """
    assemble_block(P, Q, R, S)
    q = check_q(q)
    modulus, s, _ = q_split(q)

    def w(T: OperatorTuple, i: int) -> float:
        return classical_radius(T.parts[i], angles, refine=True)

    def nrm(T: OperatorTuple, i: int) -> float:
        return operator_norm(T.parts[i])

    if case == "row":
        if not (_is_zero(R) and _is_zero(S)):
            raise ConstraintViolationError("R = S = 0", float(np.abs(R.parts).max() + np.abs(S.parts).max()))
        terms = [
            modulus / 2 * (w(P, i) + np.sqrt(w(P, i) ** 2 + nrm(Q, i) ** 2))
            + s * np.sqrt(nrm(P, i) ** 2 + nrm(Q, i) ** 2)
            for i in range(P.d)
        ]
        lower = radius_joint(P, q, restarts, max_iters, seed=seed).value
    elif case == "diagonal":
        if not (_is_zero(Q) and _is_zero(R)):
            raise ConstraintViolationError("Q = R = 0", float(np.abs(Q.parts).max() + np.abs(R.parts).max()))
        terms = [
            modulus * max(w(P, i), w(S, i)) + s * np.sqrt(nrm(P, i) ** 2 + nrm(S, i) ** 2)
            for i in range(P.d)
        ]
        lower, _ = block_lower(P, S, q, restarts, max_iters, seed)
    elif case == "antidiagonal":
        if not (_is_zero(P) and _is_zero(S)):
            raise ConstraintViolationError("P = S = 0", float(np.abs(P.parts).max() + np.abs(S.parts).max()))
        terms = [
            modulus / 2 * (nrm(R, i) + nrm(Q, i)) + s * np.sqrt(nrm(Q, i) ** 2 + nrm(R, i) ** 2)
            for i in range(P.d)
        ]
        lower = 0.0
    elif case == "symmetric":
        for i in range(P.d):
            for a, b, label in ((P, S, "S = ±P"), (Q, R, "R = ±Q")):
                off = min(
                    np.abs(a.parts[i] - b.parts[i]).max(), np.abs(a.parts[i] + b.parts[i]).max()
                )
                if off > 0:
                    raise ConstraintViolationError(label, float(off))
        terms = [
            modulus * (w(P, i) + nrm(Q, i)) + 2 * s * np.sqrt(nrm(P, i) ** 2 + nrm(Q, i) ** 2)
            for i in range(P.d)
        ]
        lower = radius_joint(P, q, restarts, max_iters, seed=seed).value
    else:
        raise ValueError(f"unknown block case {case!r}")

    upper_squared = float(sum(t * t for t in terms))
    return BlockBounds(case=case, lower=lower, upper=float(np.sqrt(upper_squared)), upper_squared=upper_squared)
