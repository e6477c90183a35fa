import numpy as np
from pydantic import BaseModel, ConfigDict

from qrange.models.operator import QParam
from qrange.models.utils import ComplexArray


class SqPair(BaseModel):
    """A pair (x, y) with ‖x‖ = ‖y‖ = 1 and ⟨x, y⟩ = q, stored with its z (None when |q| = 1)"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: ComplexArray
    z: ComplexArray | None = None
    y: ComplexArray
    q: QParam


class SqBatch(BaseModel):
    """
    A batch of constraint pairs stored row-wise as (count, n) arrays.

    When `metric` is set the constraints hold for ⟨u, v⟩_A = ⟨Au, v⟩ instead
    of the ambient inner product.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: ComplexArray
    z: ComplexArray | None = None
    y: ComplexArray
    q: QParam
    metric: ComplexArray | None = None

    def __len__(self) -> int:
        return self.x.shape[0]

    def __getitem__(self, index: int) -> SqPair:
        return SqPair(
            x=self.x[index],
            z=None if self.z is None else self.z[index],
            y=self.y[index],
            q=self.q,
        )

    @property
    def n(self) -> int:
        return self.x.shape[1]

    def pairs(self) -> list[SqPair]:
        return [self[i] for i in range(len(self))]

    def residuals(self) -> dict[str, float]:
        """Largest constraint residual over the batch, per constraint"""
        gram = self.metric
        ax = self.x if gram is None else self.x @ gram.T
        ay = self.y if gram is None else self.y @ gram.T
        norm_x = np.sum(ax * self.x.conj(), axis=1)
        norm_y = np.sum(ay * self.y.conj(), axis=1)
        inner = np.sum(ax * self.y.conj(), axis=1)
        out = {
            "norm_x": float(np.max(np.abs(norm_x - 1))),
            "norm_y": float(np.max(np.abs(norm_y - 1))),
            "inner": float(np.max(np.abs(inner - self.q))),
        }
        if self.z is not None:
            out["orthogonal"] = float(np.max(np.abs(np.sum(ax * self.z.conj(), axis=1))))
        return out
