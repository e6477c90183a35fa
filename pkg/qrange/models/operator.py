from typing import Annotated, Any, Literal

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationError,
    field_validator,
    model_validator,
)

from qrange.models.errors import (
    ConstraintViolationError,
    DimensionMismatchError,
    MalformedInputError,
)
from qrange.models.utils import (
    ComplexArray,
    complex_to_pair,
    decode_complex,
    encode_array,
    frozen,
)

# |q| may exceed 1 by this much before it is rejected
Q_TOLERANCE = 1e-12

FieldMode = Literal["complex", "real"]

Seed = Annotated[int, Field(ge=0, lt=2**64)]


def _validate_matrix(value: Any) -> np.ndarray:
    array = frozen(value)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
        raise ValueError(f"matrix must be square and non-empty, got shape {array.shape}")
    return array


def _validate_q(value: Any) -> complex:
    q = decode_complex(value)
    if not isinstance(q, complex) or not np.isfinite(q):
        raise ValueError(f"q must be a finite complex number, got {value!r}")
    if abs(q) > 1 + Q_TOLERANCE:
        raise ValueError(f"|q| must be <= 1, got {abs(q)}")
    return q


ComplexMatrix = Annotated[
    np.ndarray,
    BeforeValidator(_validate_matrix),
    PlainSerializer(encode_array, when_used="json"),
]

QParam = Annotated[
    complex,
    BeforeValidator(_validate_q),
    PlainSerializer(complex_to_pair, when_used="json"),
]


def as_matrix(value: Any) -> np.ndarray:
    """Validate a square finite complex matrix and return a read-only copy"""
    try:
        return _validate_matrix(value)
    except ValueError as e:
        raise MalformedInputError(str(e)) from e


def check_q(q: Any) -> complex:
    """Validate |q| <= 1 (within 1e-12) and return q as a Python complex"""
    try:
        return _validate_q(q)
    except ValueError:
        modulus = abs(complex(q)) if isinstance(q, (int, float, complex)) else float("nan")
        raise ConstraintViolationError("|q| <= 1", modulus - 1)


def check_seed(seed: Any) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ConstraintViolationError("0 <= seed < 2**64", seed)
    return seed


def q_split(q: complex) -> tuple[float, float, complex]:
    """Return (|q|, sqrt(1-|q|^2), q/|q|) with the phase set to 1 at q = 0"""
    modulus = min(abs(q), 1.0)
    s = float(np.sqrt(max(0.0, 1.0 - modulus * modulus)))
    phase = q / abs(q) if q != 0 else 1 + 0j
    return modulus, s, complex(phase)


class OperatorTuple(BaseModel):
    """A d-tuple (T_1, ..., T_d) of complex n×n matrices stored as a (d, n, n) stack"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    parts: ComplexArray

    @field_validator("parts")
    @classmethod
    def validate_stack(cls, parts: np.ndarray) -> np.ndarray:
        if parts.ndim == 2:
            parts = frozen(parts[None, :, :])
        if parts.ndim != 3 or parts.shape[1] != parts.shape[2]:
            raise ValueError(f"tuple parts must be a (d, n, n) stack, got shape {parts.shape}")
        if parts.shape[0] < 1 or parts.shape[1] < 1:
            raise ValueError("tuple needs d >= 1 and n >= 1")
        return parts

    @property
    def d(self) -> int:
        return self.parts.shape[0]

    @property
    def n(self) -> int:
        return self.parts.shape[1]

    @classmethod
    def of(cls, *matrices: Any) -> "OperatorTuple":
        """Build a tuple from matrices, raising domain errors instead of ValidationError"""
        try:
            stack = np.stack([np.asarray(m, dtype=np.complex128) for m in matrices])
        except ValueError as e:
            raise DimensionMismatchError(f"tuple parts differ in shape: {e}") from e
        try:
            return cls(parts=stack)
        except ValidationError as e:
            raise MalformedInputError(str(e)) from e

    def scaled(self, factor: complex) -> "OperatorTuple":
        return OperatorTuple(parts=self.parts * factor)

    def __add__(self, other: "OperatorTuple") -> "OperatorTuple":
        if self.parts.shape != other.parts.shape:
            raise DimensionMismatchError(
                f"cannot add tuples of shapes {self.parts.shape} and {other.parts.shape}"
            )
        return OperatorTuple(parts=self.parts + other.parts)

    def append(self, matrix: Any) -> "OperatorTuple":
        """Return (T_1, ..., T_d, matrix)"""
        return OperatorTuple.of(*self.parts, matrix)


class TupleDocument(BaseModel):
    """JSON wire format for a tuple; entries are [re, im] pairs in row-major order"""

    model_config = ConfigDict(extra="forbid")

    n: Annotated[int, Field(ge=1)]
    d: Annotated[int, Field(ge=1)]
    matrices: list[list[list[Annotated[list[float], Field(min_length=2, max_length=2)]]]]

    @model_validator(mode="after")
    def validate_shape(self) -> "TupleDocument":
        if len(self.matrices) != self.d:
            raise ValueError(f"expected {self.d} matrices, got {len(self.matrices)}")
        for index, matrix in enumerate(self.matrices):
            if len(matrix) != self.n or any(len(row) != self.n for row in matrix):
                raise ValueError(f"matrix {index} is not {self.n}x{self.n}")
        return self

    def to_tuple(self) -> OperatorTuple:
        array = np.asarray(self.matrices, dtype=np.float64)
        try:
            return OperatorTuple(parts=array[..., 0] + 1j * array[..., 1])
        except ValidationError as e:
            raise MalformedInputError(str(e)) from e

    @classmethod
    def from_tuple(cls, tuple_: OperatorTuple) -> "TupleDocument":
        parts = tuple_.parts
        matrices = np.stack([parts.real, parts.imag], axis=-1).tolist()
        return cls(n=tuple_.n, d=tuple_.d, matrices=matrices)

    @classmethod
    def parse(cls, text: str | bytes) -> OperatorTuple:
        """Parse a JSON document straight into an OperatorTuple"""
        try:
            return cls.model_validate_json(text).to_tuple()
        except ValidationError as e:
            raise MalformedInputError(f"malformed tuple document: {e}") from e
