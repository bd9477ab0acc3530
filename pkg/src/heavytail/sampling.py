"""
Heavy-tailed data generation and order statistics.

Points are standard multivariate Student-t draws with ``beta`` degrees of
freedom, built as a standard Gaussian divided by sqrt(chi2(beta)/beta).
"""

import numpy as np

from src.utils.errors import DomainError, OrderIndexError
from src.utils.logging import get_logger
from src.utils.rng import make_rng
from .models import DataConfig, Dataset

logger = get_logger(__name__)


def sample_dataset(cfg: DataConfig) -> Dataset:
    """Draw an i.i.d. multivariate-t dataset.

    Args:
        cfg: Data configuration (validated on construction)

    Returns:
        Dataset whose points are bit-identical for identical configs
    """
    rng = make_rng(cfg.seed)
    gauss = rng.standard_normal((cfg.n, cfg.d))
    mixing = rng.chisquare(cfg.beta, size=cfg.n) / cfg.beta
    points = gauss / np.sqrt(mixing)[:, None]
    logger.debug(f"Sampled dataset beta={cfg.beta} d={cfg.d} n={cfg.n} seed={cfg.seed}")
    return Dataset.from_points(points, config=cfg)


def _order_index(ds: Dataset, k: int) -> int:
    if k < 0 or k >= ds.n:
        raise OrderIndexError(f"Order index k={k} out of range for n={ds.n}")
    return int(ds.radius_order[ds.n - 1 - k])


def order_statistic(ds: Dataset, k: int) -> np.ndarray:
    """Return Y_(n-k), the point with the (k+1)-th largest norm (k=0 is the maximum)."""
    return ds.points[_order_index(ds, k)].copy()


def order_radius(ds: Dataset, k: int) -> float:
    """Norm of Y_(n-k)."""
    return float(ds.norms[_order_index(ds, k)])


def isolation_gap(ds: Dataset, k: int) -> float:
    """Distance from Y_(n-k) to its nearest other data point."""
    if ds.n < 2:
        raise DomainError("Isolation gap needs at least two points")
    idx = _order_index(ds, k)
    dist = np.linalg.norm(ds.points - ds.points[idx], axis=1)
    dist[idx] = np.inf
    return float(dist.min())


def right_tail(ds: Dataset) -> Dataset:
    """Mirror 1D data so that the largest-norm point is positive."""
    if ds.d == 1 and order_statistic(ds, 0)[0] < 0:
        return ds.mirrored()
    return ds
