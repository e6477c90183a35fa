"""
Set geometry on point clouds: planar hulls, nearest-point distances,
Hausdorff distance, diameters and the midpoint convexity defect.

Points of C^d are measured with the Euclidean metric of R^{2d}.
"""

import logging

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree
from scipy.spatial.distance import cdist

from qrange.models import DimensionMismatchError, PointCloud, Polygon2D
from qrange.utils.rng import stream

logger = logging.getLogger(__name__)

COLLINEAR_TOL = 1e-12
DIAMETER_CHUNK = 512
# qhull in more than six real dimensions produces too many facets to be useful
QHULL_MAX_DIM = 6


def _planar(points) -> np.ndarray:
    """Accept complex numbers or (m, 2) real rows; return an (m, 2) float array"""
    array = np.asarray(points)
    if np.iscomplexobj(array) or array.ndim == 1:
        array = np.asarray(array, dtype=np.complex128).reshape(-1)
        return np.stack([array.real, array.imag], axis=-1)
    if array.ndim != 2 or array.shape[1] != 2:
        raise DimensionMismatchError(f"planar points must be (m, 2), got shape {array.shape}")
    return array.astype(np.float64)


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points) -> Polygon2D:
    """
    Monotone-chain convex hull.

    Vertices come back counterclockwise without collinear runs; a single point
    or a segment gives a one- or two-vertex polygon.
    """
    pts = _planar(points)
    if pts.shape[0] == 0:
        raise ValueError("hull_2d needs at least one point")
    pts = np.unique(pts, axis=0)
    if pts.shape[0] <= 2:
        return Polygon2D(vertices=pts[:, 0] + 1j * pts[:, 1])

    def chain(ordered: np.ndarray) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for p in ordered:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= COLLINEAR_TOL:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    vertices = np.array(lower[:-1] + upper[:-1])
    return Polygon2D(vertices=vertices[:, 0] + 1j * vertices[:, 1])


def _segment_distance(p: np.ndarray, a: complex, b: complex) -> np.ndarray:
    ab = b - a
    length2 = abs(ab) ** 2
    if length2 == 0:
        return np.abs(p - a)
    t = np.clip(np.real((p - a) * np.conj(ab)) / length2, 0.0, 1.0)
    return np.abs(p - (a + t * ab))


def hull_signed_distances(polygon: Polygon2D, points) -> np.ndarray:
    """
    Signed distance of each point to the polygon boundary: positive inside,
    negative outside. Degenerate polygons have no interior, so points on them
    get 0 and everything else a negative distance.
    """
    pts = _planar(points)
    p = pts[:, 0] + 1j * pts[:, 1]
    v = polygon.vertices
    if len(v) == 1:
        return -np.abs(p - v[0])
    if len(v) == 2:
        return -_segment_distance(p, v[0], v[1])

    edges = np.roll(v, -1) - v
    # cross(edge, p - a) / |edge| for every (point, edge)
    rel = p[:, None] - v[None, :]
    height = np.imag(np.conj(edges)[None, :] * rel) / np.abs(edges)[None, :]
    inside = height.min(axis=1)
    outside = np.min(
        np.stack([_segment_distance(p, a, b) for a, b in zip(v, np.roll(v, -1))]), axis=0
    )
    return np.where(inside >= 0, inside, -outside)


def min_distance(cloud: PointCloud, p) -> float:
    """Distance in R^{2d} from p ∈ C^d to the nearest cloud point"""
    if cloud.count == 0:
        raise ValueError("min_distance needs a nonempty cloud")
    p = np.asarray(p, dtype=np.complex128).reshape(-1)
    if p.shape[0] != cloud.d:
        raise DimensionMismatchError(f"point has {p.shape[0]} coordinates, cloud has d={cloud.d}")
    return float(np.min(np.linalg.norm(cloud.points - p[None, :], axis=1)))


def hausdorff(a: PointCloud, b: PointCloud) -> float:
    """Symmetric Hausdorff distance between two finite clouds of the same d"""
    if a.d != b.d:
        raise DimensionMismatchError(f"cannot compare clouds with d={a.d} and d={b.d}")
    if a.count == 0 or b.count == 0:
        raise ValueError("hausdorff needs nonempty clouds")
    ra, rb = a.real_view(), b.real_view()
    forward, _ = cKDTree(rb).query(ra)
    backward, _ = cKDTree(ra).query(rb)
    return float(max(forward.max(), backward.max()))


def _brute_diameter(points: np.ndarray) -> float:
    best = 0.0
    for start in range(0, points.shape[0], DIAMETER_CHUNK):
        block = cdist(points[start : start + DIAMETER_CHUNK], points)
        best = max(best, float(block.max()))
    return best


def diameter(cloud: PointCloud) -> float:
    """Largest pairwise distance, taken over hull vertices when a hull is cheap"""
    if cloud.count < 2:
        return 0.0
    if cloud.d == 1:
        vertices = hull_2d(cloud.points[:, 0]).vertices
        return _brute_diameter(np.stack([vertices.real, vertices.imag], axis=-1))

    points = cloud.real_view()
    if points.shape[1] <= QHULL_MAX_DIM and points.shape[0] > points.shape[1] + 1:
        try:
            hull = ConvexHull(points, qhull_options="QJ")
            points = points[hull.vertices]
        except QhullError as e:
            logger.debug(f"qhull failed ({e}); falling back to all-pairs diameter")
    return _brute_diameter(points)


def convexity_defect(
    cloud: PointCloud,
    pair_count: int,
    seed: int,
    pairs: tuple[np.ndarray, np.ndarray] | None = None,
) -> float:
    """
    Largest distance from a midpoint of two cloud points to the cloud, over
    pair_count random pairs of distinct indices, divided by the cloud diameter.

    `pairs` replaces the random draw with explicit index arrays, so two clouds
    sharing a prefix can be measured at identical pairs.
    """
    if cloud.count < 2:
        raise ValueError("convexity_defect needs at least two points")
    if pairs is None:
        rng = stream(seed)
        first = rng.integers(0, cloud.count, size=pair_count)
        second = (first + 1 + rng.integers(0, cloud.count - 1, size=pair_count)) % cloud.count
    else:
        first, second = (np.asarray(i, dtype=np.int64) for i in pairs)

    width = diameter(cloud)
    if width == 0:
        return 0.0
    points = cloud.real_view()
    midpoints = (points[first] + points[second]) / 2
    gaps, _ = cKDTree(points).query(midpoints)
    defect = float(gaps.max()) / width
    logger.debug(f"convexity defect {defect:.4g} over {len(first)} pairs (diameter {width:.4g})")
    return defect
