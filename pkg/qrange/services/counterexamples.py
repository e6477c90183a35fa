"""
Reproduction of the non-convex joint q-numerical ranges of 2×2 tuples.

Each branch checks that the two displayed points are attained by explicit
witnesses, that a convex combination of them stays away from the range
(measured against a dense brute-force sweep of S_q(C²) and against a sampled
cloud), and that the midpoint defect of the cloud reflects the gap.
"""

import logging
from dataclasses import dataclass

import numpy as np

from qrange.models import (
    CloudMeta,
    FieldMode,
    OperatorTuple,
    PointCloud,
    Report,
    check_q,
    check_seed,
    q_split,
)
from qrange.services.geometry import convexity_defect, min_distance
from qrange.services.range_engine import cloud_joint, pair_values
from qrange.services.sq_sampler import pair_from_xz

logger = logging.getLogger(__name__)

ORACLE_GRID = 96
MEMBERSHIP_TOL = 1e-8

# separations established by brute_force_two_by_two sweeps at ORACLE_GRID
DELTA_Q_HALF = 0.06
DELTA_Q_ZERO = 0.15
DELTA_REAL = 0.45

ROOT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class Branch:
    name: str
    anchor: str
    T: OperatorTuple
    q: float
    mode: FieldMode
    # (point, x, z) for each attained point
    attained: tuple[tuple[tuple[complex, ...], np.ndarray, np.ndarray], ...]
    outside: tuple[complex, ...]
    delta: float
    # outside is the midpoint of the attained points
    midpoint: bool = True


def example_tuple(z1: complex = 1.0, z2: complex = 1.0) -> OperatorTuple:
    """(T1, T2) = ([[z1, 0], [0, 0]], [[0, 0], [z2, 0]]); values (z1 x1 ȳ1, z2 x1 ȳ2)"""
    return OperatorTuple.of(
        np.array([[z1, 0], [0, 0]], dtype=np.complex128),
        np.array([[0, 0], [z2, 0]], dtype=np.complex128),
    )


def remark_tuple(m: float = 1.0) -> OperatorTuple:
    """Self-adjoint pair ([[0, m], [m, 0]], [[m, 0], [0, 0]]) on R²; values (m(x2 y1 + x1 y2), m x1 y1)"""
    return OperatorTuple.of(
        np.array([[0, m], [m, 0]], dtype=np.complex128),
        np.array([[m, 0], [0, 0]], dtype=np.complex128),
    )


def _branches() -> list[Branch]:
    q = 0.5
    s = np.sqrt(1 - q * q)
    return [
        Branch(
            name="example_q_half",
            anchor="joint range of ([[1,0],[0,0]], [[0,0],[1,0]]) at q=1/2 misses a convex combination",
            T=example_tuple(),
            q=q,
            mode="complex",
            attained=(
                ((q, 0), np.array([q, s]), np.array([s, -q])),
                ((0, 0), np.array([0, 1.0]), np.array([1.0, 0])),
            ),
            outside=(q / 2, 0),
            delta=DELTA_Q_HALF,
        ),
        Branch(
            name="example_q_zero",
            anchor="same tuple at q=0: points (√3/4, −1/4) and (√3/4, 3/4) attained, (√3/4, 0) not",
            T=example_tuple(),
            q=0.0,
            mode="complex",
            attained=(
                ((ROOT3 / 4, -0.25), np.array([0.5, ROOT3 / 2]), np.array([ROOT3 / 2, -0.5])),
                ((ROOT3 / 4, 0.75), np.array([ROOT3 / 2, -0.5]), np.array([0.5, ROOT3 / 2])),
            ),
            outside=(ROOT3 / 4, 0),
            delta=DELTA_Q_ZERO,
            midpoint=False,
        ),
        Branch(
            name="real_remark",
            anchor="self-adjoint pair on R² at q=1/2: midpoint (0, q/2) of two attained points is missing",
            T=remark_tuple(),
            q=q,
            mode="real",
            attained=(
                ((s, 0), np.array([0, 1.0]), np.array([1.0, 0])),
                ((-s, q), np.array([q, -s]), np.array([s, q])),
            ),
            outside=(0, q / 2),
            delta=DELTA_REAL,
        ),
    ]


def brute_force_two_by_two(
    T: OperatorTuple, q: complex, grid: int = ORACLE_GRID, mode: FieldMode = "complex"
) -> PointCloud:
    """
    Values of T over a dense deterministic grid of S_q(C²).

    x = (cos α, e^{iφ} sin α), z = e^{iψ}(−conj x₂, conj x₁) and
    y = q̄x + √(1−|q|²)z cover every pair up to a common phase, which does not
    change the value. In real mode α runs over the full circle and φ = 0,
    ψ ∈ {0, π}.
    """
    if T.n != 2:
        raise ValueError(f"brute_force_two_by_two needs 2×2 matrices, got n={T.n}")
    q = check_q(q)
    _, s, _ = q_split(q)
    if mode == "real":
        alpha = np.linspace(0, 2 * np.pi, 4 * grid, endpoint=False)
        phi = np.zeros(1)
        psi = np.array([0.0, np.pi])
    else:
        alpha = np.linspace(0, np.pi / 2, grid)
        phi = np.linspace(0, 2 * np.pi, grid, endpoint=False)
        psi = np.linspace(0, 2 * np.pi, grid, endpoint=False)

    a, f, p = (g.reshape(-1) for g in np.meshgrid(alpha, phi, psi, indexing="ij"))
    X = np.stack([np.cos(a), np.exp(1j * f) * np.sin(a)], axis=-1)
    Z = np.exp(1j * p)[:, None] * np.stack([-X[:, 1].conj(), X[:, 0].conj()], axis=-1)
    Y = np.conj(q) * X + s * Z
    points = pair_values(T.parts, X, Y)
    meta = CloudMeta(n=2, d=T.d, q=q, seed=0, count=points.shape[0], generator=f"oracle_{mode}")
    return PointCloud(points=points, meta=meta)


def _attained_report(branch: Branch, seed: int) -> Report:
    worst = 0.0
    residuals = []
    for point, x, z in branch.attained:
        pair = pair_from_xz(x, z, branch.q)
        value = pair_values(branch.T.parts, pair.x[None], pair.y[None])[0]
        residual = float(np.linalg.norm(value - np.asarray(point, dtype=np.complex128)))
        residuals.append(residual)
        worst = max(worst, residual)
    return Report.judge(
        f"counterexample.{branch.name}.attained",
        margin=-worst,
        tolerance=MEMBERSHIP_TOL,
        seed=seed,
        samples=len(branch.attained),
        details=f"{branch.anchor}; witness residuals {residuals}",
        witnesses={
            "points": [[[complex(c).real, complex(c).imag] for c in p] for p, _, _ in branch.attained],
            "x": [x.tolist() for _, x, _ in branch.attained],
            "z": [z.tolist() for _, _, z in branch.attained],
        },
    )


def _with_attained(cloud: PointCloud, branch: Branch) -> PointCloud:
    extra = np.array([p for p, _, _ in branch.attained], dtype=np.complex128)
    meta = cloud.meta.model_copy(update={"count": len(extra), "generator": "witness"})
    return cloud.merged(PointCloud(points=extra, meta=meta))


def _separation_reports(
    branch: Branch, seed: int, samples: int, grid: int
) -> list[Report]:
    oracle = brute_force_two_by_two(branch.T, branch.q, grid, branch.mode)
    cloud = cloud_joint(branch.T, branch.q, samples, seed, mode=branch.mode)
    oracle_gap = min_distance(oracle, branch.outside)
    cloud_gap = min_distance(cloud, branch.outside)
    gap = min(oracle_gap, cloud_gap)

    separation = Report.judge(
        f"counterexample.{branch.name}.separation",
        margin=gap - branch.delta,
        tolerance=0.0,
        seed=seed,
        samples=samples + oracle.count,
        details=(
            f"{branch.anchor}; distance of {branch.outside} to oracle {oracle_gap:.4f}, "
            f"to sampled cloud {cloud_gap:.4f}, required >= {branch.delta}"
        ),
        witnesses={"outside": [[complex(c).real, complex(c).imag] for c in branch.outside]},
    )

    if not branch.midpoint:
        return [separation]

    augmented = _with_attained(cloud, branch)
    first, second = augmented.count - 2, augmented.count - 1
    defect = convexity_defect(augmented, 1, seed, pairs=(np.array([first]), np.array([second])))
    # values have norm <= √2, so the diameter is at most 2√2
    bound = branch.delta / (2 * np.sqrt(2))
    defect_report = Report.judge(
        f"counterexample.{branch.name}.defect",
        margin=defect - bound,
        tolerance=0.0,
        seed=seed,
        samples=augmented.count,
        details=f"midpoint defect {defect:.4f} of the sampled cloud plus attained points, required >= {bound:.4f}",
        witnesses={"midpoint": [[complex(c).real, complex(c).imag] for c in branch.outside]},
    )
    return [separation, defect_report]


def _complex_rerun(branch: Branch, seed: int, samples: int, grid: int) -> Report:
    """Distance of the real-space non-member to the complex range, recorded without a verdict"""
    oracle = brute_force_two_by_two(branch.T, branch.q, grid, "complex")
    cloud = cloud_joint(branch.T, branch.q, samples, seed, mode="complex")
    gap = min(min_distance(oracle, branch.outside), min_distance(cloud, branch.outside))
    logger.warning(
        f"{branch.name}: complex-mode distance of {branch.outside} is {gap:.4f}; "
        "non-membership is only established over R²"
    )
    return Report.skipped(
        f"counterexample.{branch.name}.complex",
        seed,
        f"complex-mode rerun: distance of {branch.outside} to JtW_q over C² is {gap:.4f} (no verdict)",
        margin=gap,
        samples=samples + oracle.count,
    )


def reproduce_counterexamples(
    seed: int, samples: int = 10_000, grid: int = ORACLE_GRID
) -> list[Report]:
    """Attainment, separation and defect reports for every branch"""
    seed = check_seed(seed)
    reports: list[Report] = []
    for branch in _branches():
        reports.append(_attained_report(branch, seed))
        reports.extend(_separation_reports(branch, seed, samples, grid))
        if branch.mode == "real":
            reports.append(_complex_rerun(branch, seed, samples, grid))
    return sorted(reports, key=lambda r: r.check_id)
