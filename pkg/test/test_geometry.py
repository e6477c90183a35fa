import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrange.models import CloudMeta, DimensionMismatchError, PointCloud
from qrange.services.geometry import (
    convexity_defect,
    diameter,
    hausdorff,
    hull_2d,
    hull_signed_distances,
    min_distance,
)
from qrange.services.range_engine import cloud_single
from qrange.utils.rng import random_matrix, stream


def make_cloud(points) -> PointCloud:
    points = np.asarray(points, dtype=np.complex128)
    if points.ndim == 1:
        points = points[:, None]
    meta = CloudMeta(n=2, d=points.shape[1], q=0.5, seed=0, count=points.shape[0], generator="test")
    return PointCloud(points=points, meta=meta)


SQUARE = np.array([0, 1, 1 + 1j, 1j])


def test_hull_of_square_with_interior_points():
    points = np.concatenate([SQUARE, [0.5 + 0.5j, 0.2 + 0.7j, 0.5]])
    hull = hull_2d(points)

    assert len(hull) == 4
    assert set(np.round(hull.vertices, 12)) == set(SQUARE)
    # counterclockwise: positive signed area
    v = hull.vertices
    assert np.sum(np.imag(np.conj(v) * np.roll(v, -1))) > 0


def test_hull_accepts_real_rows():
    hull = hull_2d(np.array([[0, 0], [2, 0], [0, 2], [0.5, 0.5]]))
    assert len(hull) == 3


@pytest.mark.parametrize(
    "points, size",
    [
        ([1 + 1j], 1),
        ([1 + 1j, 1 + 1j], 1),
        ([0, 1, 2, 3], 2),
    ],
)
def test_degenerate_hulls(points, size):
    assert len(hull_2d(points)) == size


def test_empty_hull_is_an_error():
    with pytest.raises(ValueError):
        hull_2d(np.array([], dtype=np.complex128))


def test_signed_distances_inside_and_outside():
    hull = hull_2d(SQUARE)
    distances = hull_signed_distances(hull, [0.5 + 0.5j, 2 + 0.5j, 1])

    np.testing.assert_allclose(distances, [0.5, -1.0, 0.0], atol=1e-12)


def test_signed_distance_to_segment_is_never_positive():
    hull = hull_2d([0, 2])
    distances = hull_signed_distances(hull, [1, 1 + 1j])
    np.testing.assert_allclose(distances, [0.0, -1.0], atol=1e-12)


def test_min_distance():
    cloud = make_cloud([[0, 0], [3, 4j]])
    assert min_distance(cloud, [3, 0]) == pytest.approx(3.0)
    with pytest.raises(DimensionMismatchError):
        min_distance(cloud, [0])


def test_hausdorff_basic():
    a = make_cloud([0, 1])
    b = make_cloud([0, 1, 3])

    assert hausdorff(a, a) == 0.0
    assert hausdorff(a, b) == pytest.approx(2.0)
    assert hausdorff(b, a) == pytest.approx(2.0)


def test_hausdorff_dimension_check():
    with pytest.raises(DimensionMismatchError):
        hausdorff(make_cloud([0]), make_cloud([[0, 0]]))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 4))
def test_diameter_matches_brute_force(seed, d):
    rng = stream(seed)
    points = rng.standard_normal((60, d)) + 1j * rng.standard_normal((60, d))
    cloud = make_cloud(points)
    real = cloud.real_view()
    brute = np.max(np.linalg.norm(real[:, None, :] - real[None, :, :], axis=-1))

    assert diameter(cloud) == pytest.approx(brute, rel=1e-12)


def test_diameter_of_single_point():
    assert diameter(make_cloud([1 + 1j])) == 0.0


@pytest.mark.parametrize(("matrix_seed", "q"), [(3, 0.5), (11, 0.3)])
def test_defect_small_for_convex_range(matrix_seed, q):
    M = random_matrix(stream(matrix_seed), 4)
    cloud = cloud_single(M, q, 10_000, seed=1)
    assert convexity_defect(cloud, 1000, seed=2) <= 0.02


def test_defect_decreases_with_sample_count():
    M = random_matrix(stream(5), 3)
    coarse = cloud_single(M, 0.4, 1000, seed=1)
    fine = cloud_single(M, 0.4, 10_000, seed=1)
    first = stream(9).integers(0, 1000, size=500)
    second = (first + 1 + stream(10).integers(0, 999, size=500)) % 1000

    pairs = (first, second)
    assert convexity_defect(fine, 0, seed=0, pairs=pairs) <= convexity_defect(coarse, 0, seed=0, pairs=pairs)


def test_defect_large_for_separated_clusters():
    cloud = make_cloud(np.concatenate([np.zeros(50), np.full(50, 10.0)]))
    pairs = (np.array([0]), np.array([99]))
    assert convexity_defect(cloud, 1, seed=0, pairs=pairs) == pytest.approx(0.5)

