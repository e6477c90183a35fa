"""
Static SVG scatter plots of point clouds with a convex-hull outline.
"""

import io

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from qrange.models import PointCloud
from qrange.services.geometry import hull_2d

# group ids of the two artists in the written SVG
POINTS_GID = "cloud-points"
HULL_GID = "cloud-hull"

SIZE_INCHES = 5.0
MARKER_SIZE = 1.5


def planar_view(cloud: PointCloud, project: tuple[int, int] | None = None) -> np.ndarray:
    """
    Points as complex numbers in the plane: the single coordinate when d = 1,
    otherwise the real columns (i, j) of the re_1, im_1, ... layout.
    """
    if project is None:
        if cloud.d != 1:
            raise ValueError(f"d={cloud.d} clouds need a projection (i, j) onto two real coordinates")
        return np.asarray(cloud.points[:, 0])
    i, j = project
    columns = cloud.real_view()
    width = columns.shape[1]
    if not (0 <= i < width and 0 <= j < width) or i == j:
        raise ValueError(f"projection ({i}, {j}) must pick two distinct columns out of {width}")
    return columns[:, i] + 1j * columns[:, j]


def _axis_labels(cloud: PointCloud, project: tuple[int, int] | None) -> tuple[str, str]:
    if project is None:
        return "Re", "Im"
    names = [f"{part}_{k}" for k in range(1, cloud.d + 1) for part in ("re", "im")]
    return names[project[0]], names[project[1]]


def render_svg(cloud: PointCloud, project: tuple[int, int] | None = None) -> str:
    """One marker per point and one closed line tracing the hull"""
    points = planar_view(cloud, project)
    hull = hull_2d(points).vertices
    ring = np.append(hull, hull[:1])

    fig = Figure(figsize=(SIZE_INCHES, SIZE_INCHES))
    ax = fig.add_subplot()
    ax.plot(
        points.real,
        points.imag,
        linestyle="none",
        marker="o",
        markersize=MARKER_SIZE,
        color="tab:blue",
        gid=POINTS_GID,
    )
    ax.plot(ring.real, ring.imag, color="tab:red", linewidth=1.0, gid=HULL_GID)
    ax.set_aspect("equal", adjustable="datalim")
    xlabel, ylabel = _axis_labels(cloud, project)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(f"{cloud.meta.generator}: n={cloud.meta.n} d={cloud.d} count={cloud.count}")

    buffer = io.BytesIO()
    # fixed hash salt and no date keep the output byte-stable across runs
    with matplotlib.rc_context({"svg.hashsalt": "qrange"}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue().decode("utf-8")
