import math
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from qrange.models.operator import QParam

Status = Literal["pass", "fail", "skip"]


class Report(BaseModel):
    """
    Outcome of one property check.

    margin is signed slack (positive = satisfied with room). For a non-skipped
    check, status is "pass" exactly when margin >= -tolerance.
    """

    model_config = ConfigDict(frozen=True)

    check_id: str
    status: Status
    margin: float
    tolerance: Annotated[float, Field(ge=0)]
    seed: Annotated[int, Field(ge=0, lt=2**64)]
    samples: Annotated[int, Field(ge=0)]
    details: str = ""
    witnesses: dict[str, Any] | None = None

    @model_validator(mode="after")
    def validate_status(self) -> "Report":
        if not math.isfinite(self.margin):
            raise ValueError(f"{self.check_id}: margin must be finite")
        if self.status == "skip":
            return self
        passed = self.margin >= -self.tolerance
        if passed != (self.status == "pass"):
            raise ValueError(
                f"{self.check_id}: status {self.status!r} inconsistent with margin {self.margin}"
            )
        if self.status == "fail" and not self.witnesses:
            raise ValueError(f"{self.check_id}: failed reports must carry witnesses")
        return self

    @classmethod
    def judge(
        cls,
        check_id: str,
        margin: float,
        tolerance: float,
        seed: int,
        samples: int,
        details: str = "",
        witnesses: dict[str, Any] | None = None,
    ) -> "Report":
        """Build a report whose status follows from margin and tolerance"""
        margin = float(margin)
        status: Status = "pass" if margin >= -tolerance else "fail"
        if status == "fail" and not witnesses:
            witnesses = {"margin": margin}
        return cls(
            check_id=check_id,
            status=status,
            margin=margin,
            tolerance=tolerance,
            seed=seed,
            samples=samples,
            details=details,
            witnesses=witnesses,
        )

    @classmethod
    def skipped(cls, check_id: str, seed: int, details: str, **extra: Any) -> "Report":
        return cls(
            check_id=check_id,
            status="skip",
            margin=float(extra.pop("margin", 0.0)),
            tolerance=0.0,
            seed=seed,
            samples=int(extra.pop("samples", 0)),
            details=details,
            witnesses=extra.pop("witnesses", None),
        )


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid")

    identity: Annotated[float, Field(ge=0)] = 1e-10
    set_distance: Annotated[float, Field(ge=0)] = 0.05
    optimizer: Annotated[float, Field(ge=0)] = 1e-3
    convexity: Annotated[float, Field(ge=0)] = 0.02
    spectral: Annotated[float, Field(ge=0)] = 1e-8
    triangle: Annotated[float, Field(ge=0)] = 1e-3


PositiveInt = Annotated[int, Field(gt=0)]


class SuiteConfig(BaseModel):
    """Parameters of a verification run; every count positive, every q in the closed unit disk"""

    model_config = ConfigDict(extra="forbid", validate_default=True)

    seed: Annotated[int, Field(ge=0, lt=2**64)] = 42
    dimensions: Annotated[list[PositiveInt], Field(min_length=1)] = [2, 3, 4]
    tuple_lengths: Annotated[list[PositiveInt], Field(min_length=1)] = [1, 2, 3, 4]
    q_values: Annotated[list[QParam], Field(min_length=1)] = [0.2, 0.5, 0.9]
    instances: PositiveInt = 50
    sandwich_instances: PositiveInt = 100
    spectral_instances: PositiveInt = 25
    block_instances: PositiveInt = 50
    triangle_instances: PositiveInt = 25
    identity_samples: PositiveInt = 200
    samples: PositiveInt = 10_000
    pair_count: PositiveInt = 1000
    restarts: PositiveInt = 16
    max_iters: PositiveInt = 500
    tolerances: Tolerances = Field(default_factory=Tolerances)
    checks: list[str] | None = None
    tsing_center: Literal["corrected", "printed"] = "corrected"

    @model_validator(mode="after")
    def validate_dimensions(self) -> "SuiteConfig":
        if min(self.dimensions) < 2:
            raise ValueError("dimensions must be >= 2 so that S_q is non-empty for every q")
        return self

    def wants(self, check_id: str) -> bool:
        """True when the check is selected (exact id or dotted prefix)"""
        if not self.checks:
            return True
        return any(check_id == c or check_id.startswith(c + ".") for c in self.checks)
