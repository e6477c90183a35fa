import numpy as np
import pytest

from qrange.models import (
    ConstraintViolationError,
    DimensionMismatchError,
    InfeasibleConstraintError,
    NonCommutingError,
    OperatorTuple,
)
from qrange.services.core_model import tuple_norm
from qrange.services.geometry import hausdorff
from qrange.services.range_engine import (
    apply_affine,
    assemble_block,
    block_bounds,
    block_remark_bounds,
    c_matrix_parameters,
    c_range_cloud,
    cloud_joint,
    cloud_single,
    disk_union_cloud,
    joint_point_spectrum,
    q_to_c_matrix,
    radius_joint,
    sandwich_bounds,
    spectral_inclusion_check,
    tsing_disks,
)
from qrange.utils.rng import random_commuting_parts, random_parts


def test_identity_cloud_is_the_point_q():
    cloud = cloud_joint(OperatorTuple.of(np.eye(2)), 0.5, 10, seed=0)

    assert cloud.count == 10
    assert cloud.meta.generator == "joint"
    np.testing.assert_allclose(cloud.points, 0.5, atol=1e-13)


def test_single_cloud_matches_one_tuple():
    M = np.array([[1, 2], [0, 1j]])
    single = cloud_single(M, 0.3, 100, seed=5)
    joint = cloud_joint(OperatorTuple.of(M), 0.3, 100, seed=5)

    np.testing.assert_array_equal(single.points, joint.points)
    assert single.meta.generator == "single"


def test_product_with_identity_appends_q(rng):
    T = OperatorTuple(parts=random_parts(rng, 2, 3))
    base = cloud_joint(T, 0.4j, 200, seed=1)
    extended = cloud_joint(T.append(np.eye(3)), 0.4j, 200, seed=1)

    np.testing.assert_allclose(extended.points[:, :2], base.points, atol=1e-14)
    np.testing.assert_allclose(extended.points[:, 2], 0.4j, atol=1e-14)


def test_cloud_values_bounded_by_tuple_norm(rng):
    T = OperatorTuple(parts=random_parts(rng, 3, 4))
    cloud = cloud_joint(T, 0.7, 500, seed=2)
    norm = np.linalg.norm(T.parts.reshape(12, 4), 2)
    assert np.max(np.linalg.norm(cloud.points, axis=1)) <= norm + 1e-12


def test_infeasible_single_dimension():
    with pytest.raises(InfeasibleConstraintError):
        cloud_joint(OperatorTuple.of(np.eye(1)), 0.5, 10, seed=0)


def test_tsing_disks_for_identity_collapse_to_q():
    disks = tsing_disks(np.eye(3), 0.5, 20, seed=1)
    for disk in disks:
        assert disk.center == pytest.approx(0.5)
        assert disk.radius < 1e-7


def test_tsing_disks_reject_unknown_center():
    with pytest.raises(ValueError):
        tsing_disks(np.eye(2), 0.5, 5, seed=1, center="middle")


def test_corrected_disk_union_reproduces_the_range():
    M = np.diag([1.0, 0.0])
    direct = cloud_single(M, 0.5, 10_000, seed=3)
    corrected = disk_union_cloud(tsing_disks(M, 0.5, 10_000, 3), 3, 2, 0.5)
    printed = disk_union_cloud(tsing_disks(M, 0.5, 10_000, 3, center="printed"), 3, 2, 0.5)

    assert hausdorff(direct, corrected) < 0.05
    assert hausdorff(direct, printed) > 0.2


def test_sandwich_bounds_diag():
    bounds = sandwich_bounds(OperatorTuple.of(np.diag([1.0, 0.0])), 0.5)

    assert bounds.upper == pytest.approx(1.0)
    assert bounds.corrected_lower == pytest.approx(0.25)
    assert bounds.paper_lower == pytest.approx(0.5 / (2 * 1.75))


@pytest.mark.parametrize("q", [0.0, 1.0, 0.5j])
def test_sandwich_bounds_need_real_q_in_open_unit_interval(q):
    with pytest.raises(ConstraintViolationError):
        sandwich_bounds(OperatorTuple.of(np.eye(2)), q)


def test_affine_map():
    T = OperatorTuple.of(np.diag([1.0, 2.0]))
    shifted = apply_affine(T, 2j, 1.0)
    np.testing.assert_allclose(shifted.parts[0], np.diag([1 + 2j, 1 + 4j]))


def test_joint_spectrum_of_diagonal_tuple():
    T = OperatorTuple.of(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
    points = joint_point_spectrum(T)

    found = sorted(tuple(np.round(p.xi.real, 8)) for p in points)
    assert found == [(1.0, 3.0), (2.0, 4.0)]
    assert all(p.residual < 1e-10 for p in points)


def test_joint_spectrum_needs_commuting_tuple(rng):
    with pytest.raises(NonCommutingError):
        joint_point_spectrum(OperatorTuple(parts=random_parts(rng, 2, 3)))


def test_spectral_inclusion_passes_for_commuting_tuple(rng):
    T = OperatorTuple(parts=random_commuting_parts(rng, 2, 3))
    report = spectral_inclusion_check(T, 0.6, tol=1e-8, seed=2)

    assert report.status == "pass"
    assert report.samples >= 1


def test_rank_one_c_matrix_parameters():
    mu, q = c_matrix_parameters(q_to_c_matrix(0.5, 3))
    assert mu == pytest.approx(1.0)
    assert q == pytest.approx(0.5)

    mu, q = c_matrix_parameters(2 * q_to_c_matrix(-0.5j, 2))
    assert mu == pytest.approx(-2j)
    assert q == pytest.approx(0.5)


def test_c_matrix_parameters_need_rank_one():
    with pytest.raises(ConstraintViolationError):
        c_matrix_parameters(np.eye(2))


def test_c_range_matches_q_range_for_padded_c(rng):
    T = OperatorTuple(parts=random_parts(rng, 1, 2))
    T = T.scaled(0.25 / tuple_norm(T))
    c_cloud = c_range_cloud(T, q_to_c_matrix(0.5, 2), 5000, seed=4)
    q_cloud = cloud_joint(T, 0.5, 5000, seed=4)

    assert c_cloud.meta.generator == "c_range"
    assert hausdorff(c_cloud, q_cloud) < 0.05


def test_c_range_dimension_check():
    with pytest.raises(DimensionMismatchError):
        c_range_cloud(OperatorTuple.of(np.eye(2)), np.eye(3), 10, seed=0)


def test_block_assembly_and_bounds(rng):
    P, Q, R, S = (OperatorTuple(parts=random_parts(rng, 2, 2)) for _ in range(4))
    block = assemble_block(P, Q, R, S)
    bounds = block_bounds(P, Q, R, S, 0.5, restarts=6, max_iters=200, seed=1)

    np.testing.assert_array_equal(block.parts[:, :2, 2:], Q.parts)
    assert block.n == 4
    assert bounds.lower <= bounds.upper
    assert bounds.upper_squared == pytest.approx(bounds.upper**2)


def test_block_assembly_shape_check():
    with pytest.raises(DimensionMismatchError):
        small = OperatorTuple.of(np.eye(2))
        assemble_block(small, small, small, OperatorTuple.of(np.eye(3)))


def test_block_remark_case_validates_zero_blocks(rng):
    P, Q = (OperatorTuple(parts=random_parts(rng, 1, 2)) for _ in range(2))
    with pytest.raises(ConstraintViolationError):
        block_remark_bounds(P, Q, P, P, 0.5, "diagonal")


def test_block_remark_diagonal_case(rng):
    P, S = (OperatorTuple(parts=random_parts(rng, 1, 2)) for _ in range(2))
    zero = OperatorTuple.of(np.zeros((2, 2)))
    bounds = block_remark_bounds(P, zero, zero, S, 0.5, "diagonal", restarts=6, max_iters=200)

    assert bounds.case == "diagonal"
    assert bounds.lower <= bounds.upper + 1e-9


def remark_blocks(rng, case):
    P, Q = (OperatorTuple(parts=random_parts(rng, 1, 2)) for _ in range(2))
    zero = OperatorTuple.of(np.zeros((2, 2)))
    if case == "row":
        return P, Q, zero, zero
    if case == "antidiagonal":
        return zero, Q, P, zero
    return P, Q, Q.scaled(-1), P.scaled(-1)


@pytest.mark.parametrize("case", ["row", "antidiagonal", "symmetric"])
@pytest.mark.parametrize("q", [0.3, 0.7])
def test_block_remark_bounds_bracket_the_radius(rng, case, q):
    P, Q, R, S = remark_blocks(rng, case)
    bounds = block_remark_bounds(P, Q, R, S, q, case, restarts=8, max_iters=300, seed=2)
    radius = radius_joint(assemble_block(P, Q, R, S), q, restarts=8, max_iters=300, seed=2).value

    assert bounds.case == case
    assert bounds.lower - 1e-3 <= radius <= bounds.upper + 1e-3
