"""Data models for heavy-tailed datasets."""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from src.utils.errors import ConfigurationError, ShapeError


@dataclass(frozen=True)
class DataConfig:
    """Provenance of a generated dataset.

    Attributes:
        beta: Tail index (degrees of freedom of the multivariate t), > 0
        d: Dimension, >= 1
        n: Sample size, >= 2
        seed: 64-bit reproducibility seed
    """

    beta: float
    d: int
    n: int
    seed: int = 0

    def __post_init__(self) -> None:
        bad = []
        if not (np.isfinite(self.beta) and self.beta > 0):
            bad.append("beta")
        if int(self.d) != self.d or self.d < 1:
            bad.append("d")
        if int(self.n) != self.n or self.n < 2:
            bad.append("n")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            bad.append("seed")
        if bad:
            raise ConfigurationError(f"Invalid DataConfig {self}: check {', '.join(bad)}", keys=bad)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DataConfig":
        return cls(
            beta=float(data["beta"]),
            d=int(data.get("d", 1)),
            n=int(data["n"]),
            seed=int(data.get("seed", 0)),
        )

    def to_dict(self) -> dict[str, Any]:
        return {"beta": self.beta, "d": self.d, "n": self.n, "seed": self.seed}


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable n x d point cloud with its radius ordering.

    ``radius_order`` sorts points by Euclidean norm ascending; ties keep the
    original index order. ``config`` is None for data loaded from a file.
    """

    points: np.ndarray
    radius_order: np.ndarray
    norms: np.ndarray
    config: DataConfig | None = field(default=None)

    @classmethod
    def from_points(cls, points: Any, config: DataConfig | None = None) -> "Dataset":
        """Build a dataset from an array of shape (n, d) or (n,) for 1D data."""
        arr = np.array(points, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError(f"Expected an (n, d) array of points, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ShapeError("Points must be finite")
        if config is not None and (config.n, config.d) != arr.shape:
            raise ShapeError(f"Points shape {arr.shape} does not match config (n={config.n}, d={config.d})")

        norms = np.linalg.norm(arr, axis=1)
        order = np.argsort(norms, kind="stable")
        for a in (arr, norms, order):
            a.setflags(write=False)
        return cls(points=arr, radius_order=order, norms=norms, config=config)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def beta(self) -> float | None:
        return self.config.beta if self.config is not None else None

    def mirrored(self) -> "Dataset":
        """Reflect the cloud through the origin; the radius order is unchanged."""
        return Dataset.from_points(-self.points, config=self.config)

    def shifted(self, offset: Any) -> "Dataset":
        """Translate every point by ``offset``; provenance is dropped."""
        return Dataset.from_points(self.points + np.asarray(offset, dtype=float))
