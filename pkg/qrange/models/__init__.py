# Re-export all models so callers can import from qrange.models directly
from qrange.models.aspace import ASpace, Compression, TriangleGap
from qrange.models.cloud import (
    BlockBounds,
    CloudMeta,
    Disk,
    FullPlane,
    InfiniteRadius,
    PointCloud,
    Polygon2D,
    RadiusEstimate,
    SandwichBounds,
    SpectrumPoint,
)
from qrange.models.errors import (
    ConstraintViolationError,
    DimensionMismatchError,
    InfeasibleConstraintError,
    KernelEscapeError,
    MalformedInputError,
    NonCommutingError,
    NotAdjointableError,
    QRangeError,
)
from qrange.models.operator import (
    ComplexMatrix,
    FieldMode,
    OperatorTuple,
    QParam,
    Seed,
    TupleDocument,
    as_matrix,
    check_q,
    check_seed,
    q_split,
)
from qrange.models.pairs import SqBatch, SqPair
from qrange.models.report import Report, SuiteConfig, Tolerances

QARangeResult = PointCloud | FullPlane

__all__ = [
    # Operators
    "ComplexMatrix",
    "FieldMode",
    "OperatorTuple",
    "QParam",
    "Seed",
    "TupleDocument",
    "as_matrix",
    "check_q",
    "check_seed",
    "q_split",
    # Pairs
    "SqPair",
    "SqBatch",
    # Clouds and estimates
    "CloudMeta",
    "PointCloud",
    "Disk",
    "Polygon2D",
    "RadiusEstimate",
    "FullPlane",
    "InfiniteRadius",
    "QARangeResult",
    "SandwichBounds",
    "BlockBounds",
    "SpectrumPoint",
    # Semi-Hilbert
    "ASpace",
    "Compression",
    "TriangleGap",
    # Reports
    "Report",
    "SuiteConfig",
    "Tolerances",
    # Errors
    "QRangeError",
    "MalformedInputError",
    "DimensionMismatchError",
    "ConstraintViolationError",
    "InfeasibleConstraintError",
    "NonCommutingError",
    "NotAdjointableError",
    "KernelEscapeError",
]
