from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from qrange.models.operator import QParam
from qrange.models.pairs import SqPair
from qrange.models.utils import ComplexArray, ComplexScalar, RealArray


class CloudMeta(BaseModel):
    """Provenance of a point cloud; written next to the CSV as a sidecar document"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: Annotated[int, Field(ge=1)]
    d: Annotated[int, Field(ge=1)]
    # q of the constraint set, or tr(C) for C-numerical-range clouds
    q: ComplexScalar
    seed: Annotated[int, Field(ge=0, lt=2**64)]
    count: Annotated[int, Field(ge=0)]
    generator: str


class PointCloud(BaseModel):
    """Finite sample of a (joint) q-numerical range; points has shape (count, d)"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["Cloud"] = "Cloud"
    points: ComplexArray
    meta: CloudMeta

    @model_validator(mode="after")
    def validate_meta(self) -> "PointCloud":
        if self.points.ndim != 2:
            raise ValueError(f"points must be (count, d), got shape {self.points.shape}")
        if self.points.shape[0] != self.meta.count:
            raise ValueError(
                f"meta.count={self.meta.count} but cloud holds {self.points.shape[0]} points"
            )
        if self.points.shape[1] != self.meta.d:
            raise ValueError(f"meta.d={self.meta.d} but points have {self.points.shape[1]} coordinates")
        return self

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def count(self) -> int:
        return self.points.shape[0]

    def real_view(self) -> np.ndarray:
        """(count, 2d) real array with columns re_1, im_1, ..., re_d, im_d"""
        return np.stack([self.points.real, self.points.imag], axis=-1).reshape(self.count, 2 * self.d)

    def merged(self, other: "PointCloud", generator: str | None = None) -> "PointCloud":
        """Concatenate two clouds of the same d, keeping this cloud's provenance"""
        points = np.concatenate([self.points, other.points])
        meta = self.meta.model_copy(
            update={"count": points.shape[0], "generator": generator or self.meta.generator}
        )
        return PointCloud(points=points, meta=meta)


class Disk(BaseModel):
    model_config = ConfigDict(frozen=True)

    center: ComplexScalar
    radius: Annotated[float, Field(ge=0)]


class RadiusEstimate(BaseModel):
    """Certified lower bound on a (joint) q-numerical radius with the pair attaining it"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["Estimate"] = "Estimate"
    value: Annotated[float, Field(ge=0)]
    witness: SqPair
    iterations: Annotated[int, Field(ge=0)]
    converged: bool
    restarts: Annotated[int, Field(ge=1)] = 1


class FullPlane(BaseModel):
    """
    Certificate that W_{q,A}(M) is the whole plane.

    For every amplitude κ the pair (κ·kernel_vector + x_range, y) satisfies the
    A-constraints, and its value κ·slope + offset grows without bound.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal["FullPlane"] = "FullPlane"
    q: QParam
    kernel_vector: ComplexArray
    x_range: ComplexArray
    y: ComplexArray
    slope: Annotated[float, Field(gt=0)]
    offset: ComplexScalar
    kappas: RealArray
    values: ComplexArray
    residual: Annotated[float, Field(ge=0)]


class InfiniteRadius(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["Infinite"] = "Infinite"
    certificate: FullPlane


class SandwichBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    paper_lower: float
    corrected_lower: float
    upper: float


class BlockBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: str = "general"
    lower: Annotated[float, Field(ge=0)]
    upper: Annotated[float, Field(ge=0)]
    upper_squared: Annotated[float, Field(ge=0)]


class SpectrumPoint(BaseModel):
    """A joint eigenvalue ξ with unit witness w, T_i w ≈ ξ_i w"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    xi: ComplexArray
    witness: ComplexArray
    residual: Annotated[float, Field(ge=0)]


class Polygon2D(BaseModel):
    """Convex polygon with counterclockwise vertices as complex numbers; may degenerate to a segment or point"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: ComplexArray

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def max_modulus(self) -> float:
        return float(np.max(np.abs(self.vertices)))
