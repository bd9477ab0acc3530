"""Data models for the Student-t location posterior."""

from dataclasses import dataclass
from typing import Any

import numpy as np

from src.utils.errors import ConfigurationError


@dataclass(frozen=True)
class Model:
    """Likelihood parameters of the location model y_j = x + eps_j, eps_j ~ t_nu.

    Attributes:
        nu: Likelihood degrees of freedom, > 0
        d: Dimension, must match the dataset
    """

    nu: float
    d: int = 1

    def __post_init__(self) -> None:
        bad = []
        if not (np.isfinite(self.nu) and self.nu > 0):
            bad.append("nu")
        if int(self.d) != self.d or self.d < 1:
            bad.append("d")
        if bad:
            raise ConfigurationError(f"Invalid Model {self}: check {', '.join(bad)}", keys=bad)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Model":
        return cls(nu=float(data["nu"]), d=int(data.get("d", 1)))

    @property
    def sqrt_nu(self) -> float:
        return float(np.sqrt(self.nu))

    @property
    def exponent(self) -> float:
        """(nu + d) / 2, the power in each likelihood factor."""
        return 0.5 * (self.nu + self.d)


@dataclass(frozen=True)
class ScoreReport:
    """Score S_n(x), its Jacobian S'_n(x) and the unnormalised log density at x."""

    value: np.ndarray
    info: np.ndarray
    log_density: float
