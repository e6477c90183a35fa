"""
Error hierarchy shared by the library and the CLI.

All errors derive from ValueError so that raising one inside a pydantic
validator still surfaces as a ValidationError.
"""


class QRangeError(ValueError):
    """Base class for every qrange domain error"""


class MalformedInputError(QRangeError):
    """A document or array failed validation"""


class DimensionMismatchError(QRangeError):
    """Shapes disagree between operands"""


class ConstraintViolationError(QRangeError):
    """An input violates a stated constraint; carries its residual"""

    def __init__(self, constraint: str, residual: float):
        self.constraint = constraint
        self.residual = float(residual)
        super().__init__(f"constraint violated: {constraint} (residual {self.residual:.3e})")


class InfeasibleConstraintError(QRangeError):
    """The constraint set S_q (or S_{q,A}) is empty"""


class NonCommutingError(QRangeError):
    """A commuting tuple was required"""

    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"tuple does not commute (max commutator norm {self.residual:.3e})")


class NotAdjointableError(QRangeError):
    """Douglas range condition R(M*A) ⊆ R(A) fails"""

    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"operator has no A-adjoint (Douglas residual {self.residual:.3e})")


class KernelEscapeError(QRangeError):
    """Operator maps N(A) outside N(A), so its q-A-range is the whole plane"""
