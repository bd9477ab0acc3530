"""Study configuration schema.

Keys are flat; grid keys take lists. Times are in process time units.
Unknown keys are rejected.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.zigzag.models import RateKind, ThinningBound


class StudyKind(str, Enum):
    EXIT_SCALING = "exit_scaling"
    PHASE_TRANSITION = "phase_transition"
    PREVALENCE = "prevalence"
    WIDTH_SCALING = "width_scaling"
    SCORE_APPROX = "score_approx"
    EVT = "evt"
    CONTOUR = "contour"


class StudyConfig(BaseModel):
    """Validated configuration of one study run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "study"
    kind: StudyKind

    # parameter grids
    beta: list[float] = Field(min_length=1)
    nu: list[float] = Field(default=[1.0], min_length=1)
    n: list[int] = Field(default=[1000], min_length=1)
    d: list[int] = Field(default=[1], min_length=1)
    k: list[int] = Field(default=[0], min_length=1)

    replicates: int = Field(default=1, ge=1)
    trajectories: int = Field(default=40, ge=1)
    t_max: float = Field(default=1e6, gt=0)
    delta: float = Field(default=0.25, gt=0, lt=0.5)
    eps: float = Field(default=0.25, gt=0, lt=0.5)
    seed: int = Field(default=0, ge=0, lt=2**64)
    output: Path | None = None

    rate_kinds: list[RateKind] = Field(default=[RateKind.CANONICAL, RateKind.SUBSAMPLING], min_length=1)
    estimator: Literal["direct", "renewal"] = "direct"
    thinning: ThinningBound = ThinningBound.GLOBAL
    bounds_proxy: Literal["radial", "gamma"] = "radial"
    grid_resolution: int | None = Field(default=None, ge=64)
    threads: int | None = Field(default=None, ge=1)

    # contour studies; window is a half-width in units of sqrt(nu)
    window: float = Field(default=2.0, gt=0)
    resolution: int = Field(default=256, ge=3, le=2048)
    regression: bool = True
    ridge_half_length: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _check_domains(self) -> "StudyConfig":
        errors = []
        if any(b <= 0 for b in self.beta):
            errors.append("beta: values must be positive")
        if any(v <= 0 for v in self.nu):
            errors.append("nu: values must be positive")
        if any(v < 2 for v in self.n):
            errors.append("n: values must be >= 2")
        if any(v < 1 for v in self.d):
            errors.append("d: values must be >= 1")
        if any(v < 0 or v >= min(self.n) for v in self.k):
            errors.append("k: values must satisfy 0 <= k < n")

        kind = self.kind
        if kind in (StudyKind.EXIT_SCALING, StudyKind.WIDTH_SCALING) and any(b > 1 for b in self.beta):
            errors.append("beta: this study needs beta <= 1")
        if kind == StudyKind.PHASE_TRANSITION and any(b >= 1 for b in self.beta):
            errors.append("beta: phase transitions need 0 < beta < 1")
        if kind in (StudyKind.EXIT_SCALING, StudyKind.PHASE_TRANSITION) and self.d != [1]:
            errors.append("d: Zig-Zag studies are one-dimensional")
        if kind in (StudyKind.EXIT_SCALING, StudyKind.PHASE_TRANSITION) and self.k != [0]:
            errors.append("k: exit times start from the micromode of the largest observation; set k = [0]")
        if kind == StudyKind.CONTOUR and self.d != [2]:
            errors.append("d: contour studies are two-dimensional; set d = [2]")
        if errors:
            raise ValueError("; ".join(errors))
        return self

    def to_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json")
