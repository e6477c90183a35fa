from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field

from qrange.models.operator import ComplexMatrix
from qrange.models.utils import ComplexArray, RealArray


class ASpace(BaseModel):
    """
    A positive semidefinite A with everything derived from its eigendecomposition.

    range_basis (n, rank) and kernel_basis (n, n - rank) are orthonormal and
    eigenvalues holds the positive eigenvalues matching range_basis columns.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    A: ComplexMatrix
    sqrtA: ComplexMatrix
    pinvA: ComplexMatrix
    pinv_sqrt: ComplexMatrix
    proj: ComplexMatrix
    rank: Annotated[int, Field(ge=0)]
    range_basis: ComplexArray
    kernel_basis: ComplexArray
    eigenvalues: RealArray
    tol: Annotated[float, Field(gt=0)]

    @property
    def n(self) -> int:
        return self.A.shape[0]


class Compression(BaseModel):
    """
    M compressed to range(A) in the orthonormal basis V = range_basis.

    Aprime = V*AV (diagonal, positive definite), Tprime = V*MV, and
    reduced = Aprime^{1/2} Tprime Aprime^{-1/2} carries the same q-range
    under the ambient inner product.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    Aprime: ComplexMatrix
    Tprime: ComplexMatrix
    basis: ComplexArray
    reduced: ComplexMatrix


class TriangleGap(BaseModel):
    model_config = ConfigDict(frozen=True)

    gap: float
    cross_sup: float
    wT: float
    wS: float
    wSum: float
    condition_gap: float
    equality: bool
