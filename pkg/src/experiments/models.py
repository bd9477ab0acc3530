"""Data models for study results."""

from dataclasses import dataclass, field
from typing import Any

import pandas as pd

from src.config.models import StudyConfig


@dataclass(frozen=True)
class GridPoint:
    """One configuration of a study grid.

    ``positions`` holds the index of each value along its axis; data seeds
    are derived from the positions of the data axes only, so replicates share
    their datasets across the model axes.
    """

    index: int
    values: dict[str, Any]
    positions: dict[str, int]


@dataclass(frozen=True)
class SlopeFit:
    """Least-squares fit of log y against log x."""

    slope: float
    intercept: float
    slope_stderr: float
    intercept_stderr: float
    n_points: int
    target: float | None = None

    def consistent_with(self, lo: float, hi: float) -> bool:
        """True when the interval slope +/- stderr meets [lo, hi]."""
        return self.slope + self.slope_stderr >= lo and self.slope - self.slope_stderr <= hi

    def to_dict(self) -> dict[str, Any]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "intercept_stderr": self.intercept_stderr,
            "n_points": self.n_points,
            "target": self.target,
        }


@dataclass
class StudyResult:
    """Rows, summary and rejections of one study run.

    ``rows`` holds one record per accepted (configuration, replicate) task;
    ``rejections`` holds the conditioning rejections with their reason, so
    len(rows) + len(rejections) equals the task count. ``artifacts`` carries
    extra tables (contour grids) written next to the rows.
    """

    config: StudyConfig
    rows: pd.DataFrame
    summary: dict[str, Any]
    rejections: pd.DataFrame = field(default_factory=pd.DataFrame)
    artifacts: dict[str, pd.DataFrame] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.config.name

    @property
    def n_tasks(self) -> int:
        return len(self.rows) + len(self.rejections)
