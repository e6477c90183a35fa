"""
Utility functions for models: complex <-> JSON codecs and frozen arrays
"""

from typing import Annotated, Any

import numpy as np
from pydantic import BeforeValidator, PlainSerializer


def complex_to_pair(value: complex) -> list[float]:
    """Encode a complex scalar as [re, im]"""
    value = complex(value)
    return [value.real, value.imag]


def decode_complex(value: Any) -> complex:
    """Accept a complex, a real number or an [re, im] pair"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex pair must have two entries, got {len(value)}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, np.generic):
        return complex(value.item())
    if isinstance(value, (int, float, complex)):
        return complex(value)
    return value


def encode_array(array: np.ndarray) -> Any:
    """Encode a complex array as nested lists whose leaves are [re, im]"""
    array = np.asarray(array, dtype=np.complex128)
    return np.stack([array.real, array.imag], axis=-1).tolist()


def decode_array(value: Any) -> np.ndarray:
    """Inverse of encode_array; plain numeric arrays pass straight through"""
    if isinstance(value, np.ndarray):
        return value
    array = np.asarray(value, dtype=np.float64)
    if array.ndim == 0 or array.shape[-1] != 2:
        raise ValueError("encoded complex arrays need a trailing [re, im] axis")
    return array[..., 0] + 1j * array[..., 1]


def frozen(array: Any, dtype=np.complex128) -> np.ndarray:
    """Copy into a read-only array; NaN and Inf are rejected"""
    out = np.array(array, dtype=dtype, copy=True)
    if not np.all(np.isfinite(out)):
        raise ValueError("array entries must be finite")
    out.setflags(write=False)
    return out


def _as_complex_array(value: Any) -> np.ndarray:
    if not isinstance(value, np.ndarray):
        value = decode_array(value)
    return frozen(value)


def _as_real_array(value: Any) -> np.ndarray:
    return frozen(value, dtype=np.float64)


ComplexScalar = Annotated[
    complex,
    BeforeValidator(decode_complex),
    PlainSerializer(complex_to_pair, when_used="json"),
]

ComplexArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_complex_array),
    PlainSerializer(encode_array, when_used="json"),
]

RealArray = Annotated[
    np.ndarray,
    BeforeValidator(_as_real_array),
    PlainSerializer(lambda a: np.asarray(a).tolist(), when_used="json"),
]
