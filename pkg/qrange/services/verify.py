"""
Property-check suite over seeded random instances.

Each check owns a generator derived from (suite seed, check id), so a check
produces the same report whether it runs alone or inside the full suite.
Per-instance outcomes are folded into one Report per check id carrying the
worst margin and the witnesses of the worst instance. An exception inside a
check becomes a failed report; the suite itself never aborts.
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from qrange.models import (
    ASpace,
    Disk,
    FullPlane,
    InfiniteRadius,
    OperatorTuple,
    PointCloud,
    Report,
    SuiteConfig,
    check_q,
    check_seed,
    q_split,
)
from qrange.models.utils import encode_array
from qrange.services.core_model import adjoint_tuple, real_imag_parts, tuple_norm
from qrange.services.counterexamples import reproduce_counterexamples
from qrange.services.geometry import convexity_defect, hausdorff
from qrange.services.range_engine import (
    apply_affine,
    assemble_block,
    block_bounds,
    block_lower,
    block_remark_bounds,
    c_matrix_parameters,
    c_range_cloud,
    cloud_joint,
    cloud_single,
    disk_union_cloud,
    pair_values,
    q_to_c_matrix,
    radius_joint,
    sandwich_bounds,
    spectral_inclusion_check,
    tsing_disks,
    values_at,
)
from qrange.services.semi_hilbert import (
    a_adjoint,
    a_inner,
    a_norm,
    build_aspace,
    cloud_qa,
    compress_to_range,
    radius_qa,
    triangle_equality_gap,
)
from qrange.services.sq_sampler import sample_sq, sample_sq_a, swap, transport
from qrange.utils.rng import (
    haar_unitary,
    named_stream,
    random_commuting_parts,
    random_matrix,
    random_parts,
    random_psd,
)

logger = logging.getLogger(__name__)

# identity checks never get a tolerance below this, even when configured to 0
IDENTITY_FLOOR = 1e-12
# operators used in Monte-Carlo set comparisons are scaled to these tuple norms
SET_SCALE = {1: 0.25, 2: 0.1}
TSING_MATRIX = np.diag([1.0, 0.0]).astype(np.complex128)
TSING_Q = 0.5
# for M = I the disk radius is the square root of a cancelled difference
TSING_IDENTITY_TOL = 1e-7
ADJOINT_TOL = 1e-10
# a tenfold denser convex cloud shrinks the gaps by about √10
REFINEMENT_RATIO = 0.8
REFINEMENT_TRIALS = 5

CheckFn = Callable[[SuiteConfig, np.random.Generator], list[Report]]


def _pairs(array: np.ndarray) -> Any:
    return encode_array(array)


@dataclass
class _Worst:
    """Tracks the smallest margin seen over the instances of one check"""

    margin: float = np.inf
    witnesses: dict[str, Any] = field(default_factory=dict)
    detail: str = ""
    count: int = 0

    def update(self, margin: float, detail: str = "", **witnesses: Any) -> None:
        self.count += 1
        if margin < self.margin:
            self.margin = float(margin)
            self.detail = detail
            self.witnesses = witnesses

    def report(
        self, check_id: str, tolerance: float, seed: int, samples: int, anchor: str
    ) -> Report:
        if self.count == 0:
            return Report.skipped(check_id, seed, f"{anchor}; no applicable instances")
        details = f"{anchor}; worst of {self.count} instances" + (f": {self.detail}" if self.detail else "")
        return Report.judge(
            check_id,
            margin=self.margin,
            tolerance=tolerance,
            seed=seed,
            samples=samples,
            details=details,
            witnesses=self.witnesses or None,
        )


def _identity_tol(cfg: SuiteConfig) -> float:
    return max(cfg.tolerances.identity, IDENTITY_FLOOR)


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**32))


def _instances(cfg: SuiteConfig, rng: np.random.Generator, count: int) -> Iterator[tuple[int, int, complex]]:
    """(n, d, q) triples cycling over the configured grids"""
    for k in range(count):
        n = cfg.dimensions[k % len(cfg.dimensions)]
        d = cfg.tuple_lengths[(k // len(cfg.dimensions)) % len(cfg.tuple_lengths)]
        q = cfg.q_values[int(rng.integers(0, len(cfg.q_values)))]
        yield n, d, q


def _random_tuple(rng: np.random.Generator, d: int, n: int, norm: float | None = None) -> OperatorTuple:
    T = OperatorTuple(parts=random_parts(rng, d, n))
    if norm is None:
        return T
    return T.scaled(norm / tuple_norm(T))


def _kernel_preserving(rng: np.random.Generator, proj: np.ndarray, n: int, scale: float = 1.0) -> np.ndarray:
    """Random M with P·M·(I − P) = 0, i.e. M(N(A)) ⊆ N(A)"""
    M = random_matrix(rng, n, scale)
    return M - proj @ M @ (np.eye(n) - proj)


# identities


def check_degenerate(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for q in (0.0, 0.5, 1j / np.sqrt(2), 1.0):
        cloud = cloud_single(np.eye(2), q, cfg.identity_samples, _seed(rng))
        deviation = float(np.max(np.abs(cloud.points[:, 0] - q)))
        worst.update(-deviation, f"q={q}", q=[complex(q).real, complex(q).imag])
    return [
        worst.report(
            "identity.degenerate", _identity_tol(cfg), cfg.seed, 4 * cfg.identity_samples,
            "W_q(I) = {q}",
        )
    ]


def check_rotation(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T = _random_tuple(rng, d, n)
        theta = float(rng.uniform(0, 2 * np.pi))
        rotation = np.exp(1j * theta)
        seed = _seed(rng)
        base = cloud_joint(T, q, cfg.identity_samples, seed)
        turned = cloud_joint(T, rotation * complex(q), cfg.identity_samples, seed)
        residual = float(np.max(np.abs(turned.points - rotation * base.points)))
        worst.update(-residual, f"n={n} d={d} q={q} θ={theta:.4f}", theta=theta, q=[q.real, q.imag])
    return [
        worst.report(
            "identity.rotation", _identity_tol(cfg), cfg.seed, cfg.instances * cfg.identity_samples,
            "JtW_{e^{iθ}q}(T) = e^{iθ}JtW_q(T) under the seed-coupled sampler",
        )
    ]


def check_adjoint(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T = _random_tuple(rng, d, n)
        batch = sample_sq(n, q, cfg.identity_samples, _seed(rng))
        swapped = swap(batch)
        star = values_at(adjoint_tuple(T), swapped)
        residual = float(np.max(np.abs(star - np.conj(values_at(T, batch)))))
        constraint = max(swapped.residuals().values())
        worst.update(-max(residual, constraint), f"n={n} d={d} q={q}", q=[q.real, q.imag])
    return [
        worst.report(
            "identity.adjoint", _identity_tol(cfg), cfg.seed, cfg.instances * cfg.identity_samples,
            "JtW_q̄(T*) = conj JtW_q(T) at swapped pairs",
        )
    ]


def check_affine(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T = _random_tuple(rng, d, n)
        alpha, beta = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        batch = sample_sq(n, q, cfg.identity_samples, _seed(rng))
        moved = values_at(apply_affine(T, alpha, beta), batch)
        expected = alpha * values_at(T, batch) + beta * complex(q)
        residual = float(np.max(np.abs(moved - expected)))
        worst.update(-residual, f"n={n} d={d} q={q} α={alpha:.3f} β={beta:.3f}")
    return [
        worst.report(
            "identity.affine", _identity_tol(cfg), cfg.seed, cfg.instances * cfg.identity_samples,
            "JtW_q(αT + βI) = αJtW_q(T) + (βq, ..., βq)",
        )
    ]


def check_unitary(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T = _random_tuple(rng, d, n)
        U = haar_unitary(rng, n)
        conjugated = OperatorTuple(parts=U.conj().T[None] @ T.parts @ U[None])
        batch = sample_sq(n, q, cfg.identity_samples, _seed(rng))
        moved = transport(batch, U)
        residual = float(np.max(np.abs(values_at(conjugated, batch) - values_at(T, moved))))
        constraint = max(moved.residuals().values())
        radius_gap = abs(
            np.max(np.linalg.norm(values_at(conjugated, batch), axis=1))
            - np.max(np.linalg.norm(values_at(T, moved), axis=1))
        )
        worst.update(-max(residual, constraint, radius_gap), f"n={n} d={d} q={q}")
    return [
        worst.report(
            "identity.unitary", _identity_tol(cfg), cfg.seed, cfg.instances * cfg.identity_samples,
            "JtW_q(U*TU) = JtW_q(T) with (Ux, Uy) ∈ S_q",
        )
    ]


def check_product(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T = _random_tuple(rng, d, n)
        seed = _seed(rng)
        base = cloud_joint(T, q, cfg.identity_samples, seed)
        extended = cloud_joint(T.append(np.eye(n)), q, cfg.identity_samples, seed)
        residual = max(
            float(np.max(np.abs(extended.points[:, :d] - base.points))),
            float(np.max(np.abs(extended.points[:, d] - q))),
        )
        worst.update(-residual, f"n={n} d={d} q={q}")
    return [
        worst.report(
            "identity.product", _identity_tol(cfg), cfg.seed, cfg.instances * cfg.identity_samples,
            "JtW_q(T, I) = JtW_q(T) × {q}",
        )
    ]


# norms and radii


def norm_equivalence_check(T: OperatorTuple, q: complex, samples: int, seed: int) -> Report:
    """‖ξ‖∞ <= ‖ξ‖₂ <= √d‖ξ‖∞ for every sampled value vector ξ"""
    values = cloud_joint(T, q, samples, seed).points
    two = np.linalg.norm(values, axis=1)
    sup = np.max(np.abs(values), axis=1)
    slack = float(min(np.min(two - sup), np.min(np.sqrt(T.d) * sup - two)))
    return Report.judge(
        "norm.equivalence",
        margin=slack,
        tolerance=IDENTITY_FLOOR * (1 + tuple_norm(T)),
        seed=seed,
        samples=samples,
        details=f"ℓ∞ <= ℓ2 <= √d ℓ∞ on {samples} value vectors (d={T.d})",
    )


def check_norm_dominance(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    dominance, equivalence = _Worst(), _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T = _random_tuple(rng, d, n)
        seed = _seed(rng)
        cloud = cloud_joint(T, q, cfg.identity_samples, seed)
        norm = tuple_norm(T)
        dominance.update(norm - float(np.max(np.linalg.norm(cloud.points, axis=1))), f"n={n} d={d} ‖T‖={norm:.4f}")
        report = norm_equivalence_check(T, q, cfg.identity_samples, seed)
        equivalence.update(report.margin, report.details)
    samples = cfg.instances * cfg.identity_samples
    return [
        dominance.report(
            "norm.dominance", 1e-10, cfg.seed, samples, "every point of JtW_q(T) has norm <= ‖T‖"
        ),
        equivalence.report(
            "norm.equivalence", IDENTITY_FLOOR, cfg.seed, samples, "‖ξ‖∞ <= ‖ξ‖₂ <= √d‖ξ‖∞"
        ),
    ]


def check_sandwich(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.sandwich_instances):
        modulus = abs(q)
        if not 0 < modulus < 1:
            continue
        T = _random_tuple(rng, d, n)
        seed = _seed(rng)
        bounds = sandwich_bounds(T, modulus)
        estimate = radius_joint(T, modulus, cfg.restarts, cfg.max_iters, seed=seed)
        cloud = cloud_joint(T, modulus, cfg.identity_samples, seed)
        top = max(estimate.value, float(np.max(np.linalg.norm(cloud.points, axis=1))))
        scale = max(bounds.upper, 1.0)
        slack = min(bounds.upper - top, estimate.value - bounds.corrected_lower, estimate.value - bounds.paper_lower)
        worst.update(
            slack / scale,
            f"n={n} d={d} q={modulus} value={estimate.value:.6f} "
            f"lower={bounds.paper_lower:.6f}/{bounds.corrected_lower:.6f} upper={bounds.upper:.6f}",
            x=_pairs(estimate.witness.x),
            y=_pairs(estimate.witness.y),
        )
    return [
        worst.report(
            "sandwich.bounds", cfg.tolerances.optimizer, cfg.seed, cfg.sandwich_instances,
            "q/(2√d(2−q²))‖T‖ <= q/(2√d)‖T‖ <= Jtω_q(T) <= ‖T‖",
        )
    ]


def check_radius_oracle(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    T = OperatorTuple.of(np.diag([1.0, 0.0]))
    for q in (0.0, 0.3, 0.7, 1.0):
        estimate = radius_joint(T, q, cfg.restarts, cfg.max_iters, seed=_seed(rng))
        expected = (1 + q) / 2
        worst.update(-abs(estimate.value - expected), f"q={q} value={estimate.value:.8f} expected={expected}")
    return [
        worst.report(
            "radius.oracle", cfg.tolerances.optimizer, cfg.seed, 4, "ω_q(diag(1, 0)) = (1 + q)/2"
        )
    ]


def check_homogeneity(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    # powers of two times a unit of Z[i] scale every float operation exactly
    units = (1, 1j, -1, -1j)
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T = _random_tuple(rng, d, n)
        xi = 2.0 ** int(rng.integers(-3, 4)) * units[int(rng.integers(0, 4))]
        seed = _seed(rng)
        base = radius_joint(T, q, cfg.restarts, cfg.max_iters, seed=seed)
        scaled = radius_joint(T.scaled(xi), q, cfg.restarts, cfg.max_iters, seed=seed)
        residual = abs(scaled.value - abs(xi) * base.value) / max(abs(xi) * base.value, 1.0)
        worst.update(-residual, f"n={n} d={d} q={q} ξ={xi}")
    return [
        worst.report(
            "radius.homogeneity", _identity_tol(cfg), cfg.seed, cfg.instances,
            "Jtω_q(ξT) = |ξ|Jtω_q(T)",
        )
    ]


def check_subadditivity(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        T, S = _random_tuple(rng, d, n), _random_tuple(rng, d, n)
        batch = sample_sq(n, q, cfg.identity_samples, _seed(rng))

        def top(tuple_: OperatorTuple) -> float:
            return float(np.max(np.linalg.norm(values_at(tuple_, batch), axis=1)))

        slack = top(T) + top(S) - top(T + S)
        worst.update(slack, f"n={n} d={d} q={q}")
    return [
        worst.report(
            "radius.subadditivity", IDENTITY_FLOOR, cfg.seed, cfg.instances * cfg.identity_samples,
            "Jtω_q(T + S) <= Jtω_q(T) + Jtω_q(S) over a shared sample",
        )
    ]


def check_definiteness(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    nonzero = [q for q in cfg.q_values if abs(q) > 0]
    if not nonzero:
        return [Report.skipped("radius.definiteness", cfg.seed, "Jtω_q(T) = 0 ⟹ T = 0 needs q ≠ 0; no such q configured")]
    worst = _Worst()
    for k, (n, d, _) in enumerate(_instances(cfg, rng, cfg.instances)):
        q = nonzero[k % len(nonzero)]
        T = _random_tuple(rng, d, n)
        estimate = radius_joint(T, q, cfg.restarts, cfg.max_iters, seed=_seed(rng))
        # Jtω_q(T) >= |q|/(2√d)‖T‖ > 0 for T ≠ 0
        floor = abs(q) / (2 * np.sqrt(d)) * tuple_norm(T)
        worst.update(estimate.value - floor, f"n={n} d={d} q={q} value={estimate.value:.6f} floor={floor:.6f}")
    return [
        worst.report(
            "radius.definiteness", cfg.tolerances.optimizer, cfg.seed, cfg.instances,
            "q ≠ 0: Jtω_q(T) > 0 for T ≠ 0",
        )
    ]


def real_part_radius_check(
    T: OperatorTuple, q: complex, restarts: int, max_iters: int, seed: int, tolerance: float
) -> Report:
    """
    Jtω_q(ℜT) and Jtω_q(ℑT) are at most ½(Jtω_q(T) + Jtω_q̄(T)); the witness of T
    transported to (y, x) gives the same value for T* at q̄.
    """
    q = check_q(q)
    real, imag = real_imag_parts(T)
    wq = radius_joint(T, q, restarts, max_iters, seed=seed)
    wbar = radius_joint(T, np.conj(q), restarts, max_iters, seed=seed)
    wr = radius_joint(real, q, restarts, max_iters, seed=seed)
    wi = radius_joint(imag, q, restarts, max_iters, seed=seed)
    half = (wq.value + wbar.value) / 2
    w = wq.witness
    star_value = float(np.linalg.norm(pair_values(adjoint_tuple(T).parts, w.y[None], w.x[None])[0]))
    transported = abs(star_value - wq.value)
    scale = max(half, 1.0)
    margin = min(half - wr.value, half - wi.value) / scale
    if transported > tolerance * scale:
        margin = min(margin, -transported / scale)
    return Report.judge(
        "radius.real_part",
        margin=margin,
        tolerance=tolerance,
        seed=seed,
        samples=4,
        details=(
            f"Jtω_q(ℜT)={wr.value:.6f} Jtω_q(ℑT)={wi.value:.6f} "
            f"½(Jtω_q + Jtω_q̄)={half:.6f} |Jtω_q(T) − value of T* at (y, x)|={transported:.3e}"
        ),
        witnesses={"x": _pairs(w.x), "y": _pairs(w.y)},
    )


def check_real_part(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, d, q in _instances(cfg, rng, cfg.instances):
        report = real_part_radius_check(
            _random_tuple(rng, d, n), q, cfg.restarts, cfg.max_iters, _seed(rng), cfg.tolerances.optimizer
        )
        worst.update(report.margin, report.details, **(report.witnesses or {}))
    return [
        worst.report(
            "radius.real_part", cfg.tolerances.optimizer, cfg.seed, cfg.instances,
            "Jtω_q(ℜT) <= ½(Jtω_q(T) + Jtω_q̄(T)) and Jtω_q(T) = Jtω_q̄(T*)",
        )
    ]


# spectra and C-ranges


def check_spectral(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    points = 0
    for n, d, q in _instances(cfg, rng, cfg.spectral_instances):
        T = OperatorTuple(parts=random_commuting_parts(rng, d, n))
        report = spectral_inclusion_check(T, q, tol=cfg.tolerances.spectral, seed=_seed(rng))
        points += report.samples
        worst.update(report.margin, f"n={n} d={d} q={q}: {report.details}", **(report.witnesses or {}))
    return [
        worst.report(
            "spectral.inclusion", cfg.tolerances.spectral, cfg.seed, points, "qσ_p(T) ⊆ JtW_q(T)"
        )
    ]


def check_c_range(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    equality, rank_one, pointwise = _Worst(), _Worst(), _Worst()
    tol = cfg.tolerances.set_distance
    for n in (2, 3):
        for d in (1, 2):
            for q in (0.4, 0.8):
                T = _random_tuple(rng, d, n, SET_SCALE[d])
                seed = _seed(rng)
                gap = hausdorff(
                    c_range_cloud(T, q_to_c_matrix(q, n), cfg.samples, seed),
                    cloud_joint(T, q, cfg.samples, seed),
                )
                equality.update(-gap, f"n={n} d={d} q={q} hausdorff={gap:.4f}")

                a, b = (random_matrix(rng, n)[:, 0] for _ in range(2))
                C = np.outer(a, b.conj())
                C *= rng.uniform(0.5, 1.5) / np.linalg.norm(C)
                mu, q_c = c_matrix_parameters(C)
                ranged = c_range_cloud(T, C, cfg.samples, seed)
                scaled = cloud_joint(T, q_c, cfg.samples, seed)
                scaled = scaled.model_copy(update={"points": mu * scaled.points})
                gap = hausdorff(ranged, scaled)
                rank_one.update(-gap, f"n={n} d={d} μ={mu:.4f} q={q_c.real:.4f} hausdorff={gap:.4f}", C=_pairs(C))

                U = haar_unitary(rng, n)
                C0 = q_to_c_matrix(q, n)
                _, s, _ = q_split(q)
                x, y = U[:, 0], np.conj(q) * U[:, 0] + s * U[:, 1]
                trace = np.einsum("ab,bc,icd,da->i", C0, U.conj().T, T.parts, U)
                direct = pair_values(T.parts, x[None], y[None])[0]
                pointwise.update(-float(np.max(np.abs(trace - direct))), f"n={n} d={d} q={q}")

    return [
        equality.report(
            "crange.equality", tol, cfg.seed, 8 * cfg.samples, "JtW_C(T) = JtW_q(T) for C = [[q, √(1−q²)], [0, 0]] ⊕ 0"
        ),
        pointwise.report(
            "crange.pointwise", _identity_tol(cfg), cfg.seed, 8,
            "tr(C U*T_iU) = ⟨T_i u₁, q̄u₁ + √(1−q²)u₂⟩ for the same U",
        ),
        rank_one.report(
            "crange.rank_one", tol, cfg.seed, 8 * cfg.samples, "rank-one C: JtW_C(T) = μ·JtW_q(T)"
        ),
    ]


# block matrices


def _block_estimate(P, Q, R, S, q, cfg: SuiteConfig, seed: int) -> float:
    _, lifts = block_lower(P, S, q, cfg.restarts, cfg.max_iters, seed)
    assembled = assemble_block(P, Q, R, S)
    return radius_joint(assembled, q, cfg.restarts, cfg.max_iters, seed=seed, warm_starts=lifts).value


def check_block(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for k in range(cfg.block_instances):
        d = 1 + k % 2
        q = cfg.q_values[int(rng.integers(0, len(cfg.q_values)))]
        P, Q, R, S = (_random_tuple(rng, d, 2) for _ in range(4))
        seed = _seed(rng)
        bounds = block_bounds(P, Q, R, S, q, cfg.restarts, cfg.max_iters, seed)
        value = _block_estimate(P, Q, R, S, q, cfg, seed)
        scale = max(bounds.upper, 1.0)
        worst.update(
            min(value - bounds.lower, bounds.upper - value) / scale,
            f"d={d} q={q} lower={bounds.lower:.6f} value={value:.6f} upper={bounds.upper:.6f}",
        )
    return [
        worst.report(
            "block.bounds", cfg.tolerances.optimizer, cfg.seed, cfg.block_instances,
            "max(Jtω_q(P), Jtω_q(S)) <= Jtω_q([[P, Q], [R, S]]) <= upper",
        )
    ]


def check_block_remarks(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    zero = OperatorTuple(parts=np.zeros((1, 2, 2)))
    for k in range(cfg.block_instances):
        q = cfg.q_values[int(rng.integers(0, len(cfg.q_values)))]
        P, Q, R, S = (_random_tuple(rng, 1, 2) for _ in range(4))
        case = ("row", "diagonal", "antidiagonal", "symmetric")[k % 4]
        if case == "row":
            R, S = zero, zero
        elif case == "diagonal":
            Q, R = zero, zero
        elif case == "antidiagonal":
            P, S = zero, zero
        else:
            sign = 1 if rng.random() < 0.5 else -1
            S, R = P.scaled(sign), Q.scaled(sign)
        seed = _seed(rng)
        bounds = block_remark_bounds(P, Q, R, S, q, case, cfg.restarts, cfg.max_iters, seed)
        value = _block_estimate(P, Q, R, S, q, cfg, seed)
        scale = max(bounds.upper, 1.0)
        worst.update(
            min(value - bounds.lower, bounds.upper - value) / scale,
            f"{case} q={q} lower={bounds.lower:.6f} value={value:.6f} upper={bounds.upper:.6f}",
            case=case,
        )
    return [
        worst.report(
            "block.remarks", cfg.tolerances.optimizer, cfg.seed, cfg.block_instances,
            "row, diagonal, antidiagonal and symmetric block specializations",
        )
    ]


# convexity


def _defect_report(check_id: str, clouds: list[PointCloud], cfg: SuiteConfig, anchor: str) -> Report:
    worst = _Worst()
    for k, cloud in enumerate(clouds):
        defect = convexity_defect(cloud, cfg.pair_count, cloud.meta.seed)
        worst.update(-defect, f"cloud {k} (n={cloud.meta.n}, d={cloud.d}, q={cloud.meta.q:.3f}): defect {defect:.4f}")
    return worst.report(check_id, cfg.tolerances.convexity, cfg.seed, sum(c.count for c in clouds), anchor)


def check_convexity(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    n_single = max(cfg.dimensions)
    single = [
        cloud_single(random_matrix(rng, n_single), q, cfg.samples, _seed(rng)) for q in cfg.q_values
    ]
    commuting = [
        cloud_joint(OperatorTuple(parts=random_commuting_parts(rng, 2, 2)), q, cfg.samples, _seed(rng))
        for q in cfg.q_values
    ]
    span = []
    for q in cfg.q_values:
        base = random_matrix(rng, n_single)
        a, b = (rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(2))
        parts = a[:, None, None] * base[None] + b[:, None, None] * np.eye(n_single)[None]
        span.append(cloud_joint(OperatorTuple(parts=parts), q, cfg.samples, _seed(rng)))

    weighted = []
    for q in cfg.q_values:
        A = random_psd(rng, n_single, max(2, n_single - 1))
        space = build_aspace(A)
        M = _kernel_preserving(rng, space.proj, n_single)
        result = cloud_qa(M, space, q, cfg.samples, _seed(rng))
        if isinstance(result, PointCloud):
            weighted.append(result)

    return [
        _defect_report("convexity.single", single, cfg, "W_q(T) is convex"),
        _defect_report("convexity.commuting", commuting, cfg, "JtW_q of a commuting non-scalar 2×2 pair is convex"),
        _defect_report("convexity.span", span, cfg, "JtW_q(a_iT + b_iI) is convex"),
        _defect_report("convexity.semihilbert", weighted, cfg, "W_{q,A}(T) is convex when T(N(A)) ⊆ N(A)"),
    ]


def check_refinement(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    """
    The midpoint defect of W_q(M) shrinks when the cloud grows tenfold.

    Each trial draws a coarse cloud (samples/10) and a fine cloud (samples)
    from independent seeds, each measured at its own random pairs. The median
    fine defect must stay below REFINEMENT_RATIO times the median coarse one;
    a non-convex range keeps a fixed gap at every size and fails.
    """
    worst = _Worst()
    small_count = max(2, cfg.samples // 10)
    for q in cfg.q_values:
        M = random_matrix(rng, max(cfg.dimensions))
        coarse, fine = [], []
        for _ in range(REFINEMENT_TRIALS):
            small = cloud_single(M, q, small_count, _seed(rng))
            large = cloud_single(M, q, cfg.samples, _seed(rng))
            coarse.append(convexity_defect(small, cfg.pair_count, _seed(rng)))
            fine.append(convexity_defect(large, cfg.pair_count, _seed(rng)))
        coarse_median, fine_median = float(np.median(coarse)), float(np.median(fine))
        worst.update(
            REFINEMENT_RATIO * coarse_median - fine_median,
            f"q={q} median defect {coarse_median:.4f} at {small_count} -> {fine_median:.4f} at {cfg.samples}",
            coarse=coarse,
            fine=fine,
        )
    return [
        worst.report(
            "convexity.refinement", 0.0, cfg.seed, len(cfg.q_values) * REFINEMENT_TRIALS * (cfg.samples + small_count),
            f"median convexity defect at samples is at most {REFINEMENT_RATIO} times the one at samples/10",
        )
    ]


# semi-Hilbert


def check_reduction(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, _, q in _instances(cfg, rng, cfg.instances):
        M = random_matrix(rng, n)
        space = build_aspace(np.eye(n))
        seed = _seed(rng)
        weighted = cloud_qa(M, space, q, cfg.identity_samples, seed)
        plain = cloud_single(M, q, cfg.identity_samples, seed)
        residual = float(np.max(np.abs(weighted.points - plain.points)))
        radius_a = radius_qa(M, space, q, cfg.restarts, cfg.max_iters, seed=seed)
        radius_plain = radius_joint(OperatorTuple.of(M), q, cfg.restarts, cfg.max_iters, seed=seed)
        residual = max(residual, abs(radius_a.value - radius_plain.value))
        worst.update(-residual, f"n={n} q={q}")
    return [
        worst.report(
            "semihilbert.reduction", _identity_tol(cfg), cfg.seed, cfg.instances * cfg.identity_samples,
            "A = I: W_{q,A} and w_{q,A} coincide with W_q and ω_q",
        )
    ]


def check_a_adjoint(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, _, q in _instances(cfg, rng, cfg.instances):
        n = max(n, 3)
        A = random_psd(rng, n, int(rng.integers(2, n + 1)))
        space = build_aspace(A)
        M = _kernel_preserving(rng, space.proj, n)
        N = _kernel_preserving(rng, space.proj, n)
        alpha = complex(rng.standard_normal() + 1j * rng.standard_normal())
        Ms, Ns = a_adjoint(M, space), a_adjoint(N, space)
        defining = np.linalg.norm(A @ Ms - M.conj().T @ A)
        linear = np.linalg.norm(a_adjoint(M + alpha * N, space) - (Ms + np.conj(alpha) * Ns))
        product_ = np.linalg.norm(a_adjoint(M @ N, space) - Ns @ Ms)

        batch = sample_sq_a(space, q, cfg.identity_samples, _seed(rng))
        xn = np.array([a_norm(space, x) for x in batch.x])
        yn = np.array([a_norm(space, y) for y in batch.y])
        inners = np.array([abs(a_inner(space, x, y)) for x, y in zip(batch.x, batch.y)])
        schwarz = float(np.max(inners - xn * yn))

        scale = 1 + np.linalg.norm(M) * np.linalg.norm(A) + np.linalg.norm(N) * np.linalg.norm(A)
        residual = max(defining, linear, product_) / scale
        worst.update(
            -max(residual, schwarz),
            f"n={n} rank={space.rank} A♯ residuals {defining:.2e}/{linear:.2e}/{product_:.2e} schwarz {schwarz:.2e}",
            A=_pairs(A),
            M=_pairs(M),
        )
    return [
        worst.report(
            "semihilbert.adjoint", max(cfg.tolerances.identity, 1e-10), cfg.seed, cfg.instances,
            "A·M♯ = M*·A, (M + αN)♯ = M♯ + ᾱN♯, (MN)♯ = N♯M♯, Cauchy–Schwarz",
        )
    ]


def a_adjoint_range_checks(
    M: np.ndarray, space: ASpace, q: complex, samples: int, restarts: int, max_iters: int, seed: int, tolerance: float
) -> Report:
    """(M♯)♯ = PMP, ⟨M♯y, x⟩_A = conj⟨Mx, y⟩_A on sampled pairs and w_{q,A}(M♯) = w_{q̄,A}(M)"""
    sharp = a_adjoint(M, space)
    double = np.linalg.norm(a_adjoint(sharp, space) - space.proj @ M @ space.proj)
    batch = sample_sq_a(space, q, samples, seed)
    conj_gap = max(
        abs(a_inner(space, sharp @ y, x) - np.conj(a_inner(space, M @ x, y))) for x, y in zip(batch.x, batch.y)
    )
    w_sharp = radius_qa(sharp, space, q, restarts, max_iters, seed=seed)
    w_bar = radius_qa(M, space, np.conj(q), restarts, max_iters, seed=seed)
    scale = 1 + np.linalg.norm(M)
    exact = max(double, conj_gap) / scale
    radius_gap = abs(w_sharp.value - w_bar.value) / max(w_bar.value, 1.0)
    # each residual is measured in units of its own threshold
    margin = -max(exact / ADJOINT_TOL, radius_gap / tolerance)
    return Report.judge(
        "semihilbert.adjoint_range",
        margin=margin,
        tolerance=1.0,
        seed=seed,
        samples=samples,
        details=(
            f"‖(M♯)♯ − PMP‖={double:.2e} max|⟨M♯y,x⟩_A − conj⟨Mx,y⟩_A|={conj_gap:.2e} "
            f"w(M♯)={w_sharp.value:.6f} w_q̄(M)={w_bar.value:.6f}"
        ),
        witnesses={"M": _pairs(M), "A": _pairs(space.A)},
    )


def check_a_adjoint_range(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    for n, _, q in _instances(cfg, rng, max(1, cfg.instances // 5)):
        n = max(n, 3)
        space = build_aspace(random_psd(rng, n, int(rng.integers(2, n + 1))))
        M = _kernel_preserving(rng, space.proj, n)
        report = a_adjoint_range_checks(
            M, space, q, cfg.identity_samples, cfg.restarts, cfg.max_iters, _seed(rng), cfg.tolerances.optimizer
        )
        worst.update(report.margin, report.details, **(report.witnesses or {}))
    return [
        worst.report(
            "semihilbert.adjoint_range", cfg.tolerances.optimizer, cfg.seed, cfg.instances,
            "W_{q,A}(M♯) = conj W_{q̄,A}(M) and (M♯)♯ = PMP",
        )
    ]


def check_kernel_escape(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    growth, certificate = _Worst(), _Worst()
    A = np.diag([1.0, 1.0, 0.0]).astype(np.complex128)
    space = build_aspace(A)
    for k, q in enumerate(cfg.q_values):
        M = random_matrix(rng, 3, 0.1)
        M[:, 2] = 0
        M[0, 2] = 1.0 if k == 0 else complex(rng.standard_normal(), rng.standard_normal())
        result = cloud_qa(M, space, q, cfg.identity_samples, _seed(rng))
        if not isinstance(result, FullPlane):
            growth.update(-1.0, f"q={q}: expected FullPlane, got {result.kind}")
            continue
        steps = float(np.min(np.diff(result.values.real)))
        growth.update(
            min(float(np.max(np.abs(result.values))) - 1e3, steps),
            f"q={q} slope={result.slope:.4f} max |value|={np.max(np.abs(result.values)):.3e}",
        )
        certificate.update(-result.residual, f"q={q}", kernel_vector=_pairs(result.kernel_vector))
        if not isinstance(radius_qa(M, space, q, cfg.restarts, cfg.max_iters), InfiniteRadius):
            growth.update(-1.0, f"q={q}: radius_qa did not report an infinite radius")
    return [
        growth.report(
            "semihilbert.kernel_escape", 0.0, cfg.seed, len(cfg.q_values),
            "T(N(A)) ⊄ N(A) ⟹ W_{q,A}(T) = C, certificate values unbounded",
        ),
        certificate.report(
            "semihilbert.kernel_escape.certificate", max(cfg.tolerances.identity, 1e-10), cfg.seed,
            len(cfg.q_values), "certificate pairs lie in S_{q,A}",
        ),
    ]


def check_compression(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    worst = _Worst()
    spaces = [np.diag([1.0, 1.0, 0.0]).astype(np.complex128), random_psd(rng, 4, 2)]
    for A in spaces:
        space = build_aspace(A)
        n = space.n
        for q in cfg.q_values:
            M = _kernel_preserving(rng, space.proj, n)
            reduced = compress_to_range(M, space).reduced
            M *= SET_SCALE[1] / np.linalg.norm(reduced, 2)
            compressed = compress_to_range(M, space)
            seed = _seed(rng)
            full = cloud_qa(M, space, q, cfg.samples, seed)
            small = cloud_qa(compressed.Tprime, build_aspace(compressed.Aprime), q, cfg.samples, seed + 1)
            gap = hausdorff(full, small)
            worst.update(-gap, f"n={n} rank={space.rank} q={q} hausdorff={gap:.4f}", A=_pairs(A))
    return [
        worst.report(
            "semihilbert.compression", cfg.tolerances.set_distance, cfg.seed, 2 * len(cfg.q_values) * cfg.samples,
            "W_{q,A}(T) = W_{q,A′}(T′) when T(N(A)) ⊆ N(A)",
        )
    ]


def check_triangle(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    same, implication = _Worst(), _Worst()
    space = build_aspace(np.diag([2.0, 1.0, 1.0]).astype(np.complex128))
    for k in range(cfg.triangle_instances):
        q = 0.6 if k % 2 == 0 else cfg.q_values[int(rng.integers(0, len(cfg.q_values)))]
        Mt = random_matrix(rng, 3)
        seed = _seed(rng)
        if k == 0:
            result = triangle_equality_gap(
                Mt, Mt, space, q, cfg.restarts, cfg.max_iters, seed, cfg.identity_samples, cfg.tolerances.triangle
            )
            off = max(abs(result.gap), abs(result.cross_sup - result.wT**2))
            same.update(-off, f"S = T: gap={result.gap:.2e} cross_sup={result.cross_sup:.6f} wT²={result.wT**2:.6f}")
            continue
        Ms = random_matrix(rng, 3)
        result = triangle_equality_gap(
            Mt, Ms, space, q, cfg.restarts, cfg.max_iters, seed, cfg.identity_samples, cfg.tolerances.triangle
        )
        product_ = result.wT * result.wS
        margin = min(result.gap + 1e-8, 1e-3 * product_ - result.condition_gap) if result.gap < 1e-4 else result.gap + 1e-8
        implication.update(
            margin,
            f"q={q} gap={result.gap:.3e} cross_sup={result.cross_sup:.6f} wT·wS={product_:.6f}",
            Mt=_pairs(Mt),
            Ms=_pairs(Ms),
        )
    return [
        same.report(
            "semihilbert.triangle", 1e-6, cfg.seed, 1,
            "w_{q,A}(2T) = 2w_{q,A}(T) and sup ℜ(⟨y,Tx⟩_A⟨Tx,y⟩_A) = w_{q,A}(T)²",
        ),
        implication.report(
            "semihilbert.triangle.implication", cfg.tolerances.optimizer, cfg.seed, cfg.triangle_instances,
            "w(T + S) = w(T) + w(S) ⟹ sup ℜ(⟨y,Tx⟩_A⟨Sx,y⟩_A) = w(T)w(S)",
        ),
    ]


# counterexamples and the disk family


def tsing_typo_report(
    M: np.ndarray,
    q: complex,
    seed: int,
    count: int = 10_000,
    tolerance: float = 0.05,
    center: str = "corrected",
) -> Report:
    """
    Hausdorff distance from the sampled W_q(M) to disk-union clouds with center
    q⟨Mx,x⟩ and with the printed center ⟨Mx,x⟩. The report passes when the
    selected center reproduces the range.
    """
    M = np.asarray(M, dtype=np.complex128)
    q = check_q(q)
    seed = check_seed(seed)
    n = M.shape[0]
    direct = cloud_single(M, q, count, seed)

    def union(kind: str) -> PointCloud:
        disks: list[Disk] = tsing_disks(M, q, count, seed, center=kind)
        return disk_union_cloud(disks, seed, n, q, generator=f"disk_union_{kind}")

    corrected = hausdorff(direct, union("corrected"))
    printed = hausdorff(direct, union("printed"))
    checked = corrected if center == "corrected" else printed
    return Report.judge(
        "tsing.center",
        margin=-checked,
        tolerance=tolerance,
        seed=seed,
        samples=count,
        details=(
            f"Tsing disks for q={q}: Hausdorff to the direct cloud is {corrected:.4f} with center q⟨Mx,x⟩ "
            f"and {printed:.4f} with center ⟨Mx,x⟩; checked center: {center}"
        ),
        witnesses={"corrected": corrected, "printed": printed, "M": _pairs(M)},
    )


def check_tsing(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    report = tsing_typo_report(
        TSING_MATRIX, TSING_Q, cfg.seed, cfg.samples, cfg.tolerances.set_distance, cfg.tsing_center
    )
    exact = tsing_typo_report(np.eye(2), TSING_Q, cfg.seed, cfg.identity_samples, TSING_IDENTITY_TOL, "corrected")
    printed = exact.witnesses["printed"] if exact.witnesses else 0.0
    identity = Report.judge(
        "tsing.identity",
        margin=-max(abs(printed - abs(1 - TSING_Q)), -exact.margin),
        tolerance=TSING_IDENTITY_TOL,
        seed=cfg.seed,
        samples=cfg.identity_samples,
        details=f"M = I: printed-center error {printed:.6f}, expected |1 − q| = {abs(1 - TSING_Q)}",
        witnesses={"printed": printed},
    )
    return [report, identity]


def check_counterexamples(cfg: SuiteConfig, rng: np.random.Generator) -> list[Report]:
    return reproduce_counterexamples(cfg.seed, samples=cfg.samples)


CHECKS: dict[str, CheckFn] = {
    "identity.degenerate": check_degenerate,
    "identity.rotation": check_rotation,
    "identity.adjoint": check_adjoint,
    "identity.affine": check_affine,
    "identity.unitary": check_unitary,
    "identity.product": check_product,
    "norm.dominance": check_norm_dominance,
    "sandwich.bounds": check_sandwich,
    "radius.oracle": check_radius_oracle,
    "radius.homogeneity": check_homogeneity,
    "radius.subadditivity": check_subadditivity,
    "radius.definiteness": check_definiteness,
    "radius.real_part": check_real_part,
    "spectral.inclusion": check_spectral,
    "crange.equality": check_c_range,
    "block.bounds": check_block,
    "block.remarks": check_block_remarks,
    "convexity.single": check_convexity,
    "convexity.refinement": check_refinement,
    "semihilbert.reduction": check_reduction,
    "semihilbert.adjoint": check_a_adjoint,
    "semihilbert.adjoint_range": check_a_adjoint_range,
    "semihilbert.kernel_escape": check_kernel_escape,
    "semihilbert.compression": check_compression,
    "semihilbert.triangle": check_triangle,
    "counterexample": check_counterexamples,
    "tsing.center": check_tsing,
}

# checks that emit more than one report id
PRODUCES: dict[str, tuple[str, ...]] = {
    "norm.dominance": ("norm.dominance", "norm.equivalence"),
    "crange.equality": ("crange.equality", "crange.pointwise", "crange.rank_one"),
    "convexity.single": ("convexity.single", "convexity.commuting", "convexity.span", "convexity.semihilbert"),
    "semihilbert.kernel_escape": ("semihilbert.kernel_escape", "semihilbert.kernel_escape.certificate"),
    "semihilbert.triangle": ("semihilbert.triangle", "semihilbert.triangle.implication"),
    "tsing.center": ("tsing.center", "tsing.identity"),
    "counterexample": ("counterexample",),
}


def _selected(cfg: SuiteConfig, key: str) -> bool:
    """A check runs when any id it produces is wanted, or a wanted id lies under one of them"""
    if cfg.checks is None:
        return True
    ids = PRODUCES.get(key, (key,))
    return any(cfg.wants(i) or c.startswith(i + ".") for i in ids for c in cfg.checks)


def _crashed(check_id: str, seed: int, error: Exception) -> Report:
    return Report.judge(
        check_id,
        margin=-1.0,
        tolerance=0.0,
        seed=seed,
        samples=0,
        details=f"check raised {type(error).__name__}: {error}",
        witnesses={"error": repr(error)},
    )


def run_suite(cfg: SuiteConfig) -> list[Report]:
    """Run every selected check and return the reports ordered by check id"""
    reports: list[Report] = []
    for key, check in CHECKS.items():
        if not _selected(cfg, key):
            continue
        rng = named_stream(cfg.seed, key)
        try:
            produced = check(cfg, rng)
        except Exception as e:
            logger.error(f"check {key} raised {type(e).__name__}: {e}", exc_info=True)
            reports.append(_crashed(key, cfg.seed, e))
            continue
        for report in produced:
            if not cfg.wants(report.check_id):
                continue
            logger.info(f"{report.check_id}: {report.status} (margin {report.margin:.3e}, tolerance {report.tolerance:.1e})")
            reports.append(report)
    return sorted(reports, key=lambda r: r.check_id)
