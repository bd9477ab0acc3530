"""
Approximate score near an extreme observation and its grid-sup diagnostics.

Inside F_n = {x : |x - Y_(n-k)| < 2|Y_(n-k)|/n} the bulk of the data is
replaced by (n - 1) x / |x|^2; outside F_n the approximate score equals S_n.
Sups are taken over nested grids, so doubling ``grid_resolution`` never
lowers a reported value.
"""

import numpy as np
from scipy import stats
from scipy.stats import qmc

from src.heavytail.models import Dataset
from src.heavytail.sampling import order_statistic
from src.utils.errors import ConfigurationError, DomainError
from .models import Model
from .score import as_position, as_positions, score, score_batch, score_term

MIN_GRID_RESOLUTION = 64


def default_resolution(d: int) -> int:
    """1024 points across the diameter in 1D; 64 radii by 64 directions otherwise."""
    return 1024 if d == 1 else 64


def sphere_directions(d: int, m: int) -> np.ndarray:
    """Deterministic unit vectors, shape (m, d).

    d=1 gives {+1, -1}; d=2 gives equispaced angles 2 pi j / m; higher
    dimensions map an unscrambled Halton sequence through normal quantiles.
    The first m directions of a larger request are the same vectors.
    """
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        angles = 2.0 * np.pi * np.arange(m) / m
        return np.column_stack([np.cos(angles), np.sin(angles)])
    halton = qmc.Halton(d=d, scramble=False).random(m + 1)[1:]
    gauss = stats.norm.ppf(halton)
    return gauss / np.linalg.norm(gauss, axis=1, keepdims=True)


def ball_grid(center: np.ndarray, radius: float, resolution: int, closed: bool) -> np.ndarray:
    """Nested grid of a Euclidean ball.

    1D: ``resolution`` equal intervals across the diameter (end points only
    when ``closed``). d >= 2: radii radius*i/resolution times
    ``resolution`` directions.
    """
    d = center.shape[0]
    if d == 1:
        idx = np.arange(0, resolution + 1) if closed else np.arange(1, resolution)
        return center[0] - radius + 2.0 * radius * idx[:, None] / resolution
    stop = resolution + 1 if closed else resolution
    radii = radius * np.arange(0, stop) / resolution
    dirs = sphere_directions(d, resolution)
    pts = center[None, None, :] + radii[:, None, None] * dirs[None, :, :]
    return pts.reshape(-1, d)


def _check_resolution(grid_resolution: int | None, d: int) -> int:
    if grid_resolution is None:
        return default_resolution(d)
    if grid_resolution < MIN_GRID_RESOLUTION:
        raise ConfigurationError(
            f"grid_resolution must be >= {MIN_GRID_RESOLUTION}, got {grid_resolution}", keys=["grid_resolution"]
        )
    return grid_resolution


def _bulk_term(n: int, xs: np.ndarray, scale: float) -> np.ndarray:
    if n <= 1:
        return np.zeros_like(xs)
    r2 = np.einsum("md,md->m", xs, xs)
    return scale * xs / r2[:, None]


def approx_score(model: Model, ds: Dataset, k: int, x) -> np.ndarray:
    """Approximate score around Y_(n-k).

    Raises:
        DomainError: If Y_(n-k) is the origin
    """
    anchor = order_statistic(ds, k)
    r = float(np.linalg.norm(anchor))
    if r == 0:
        raise DomainError(f"Order statistic k={k} sits at the origin")
    xv = as_position(model, x)
    if np.linalg.norm(xv - anchor) < 2.0 * r / ds.n:
        bulk = _bulk_term(ds.n, xv[None, :], ds.n - 1.0)[0]
        return bulk + score_term(model, xv, anchor)
    return score(model, ds, xv)


def score_deviation_sup(model: Model, ds: Dataset, k: int, grid_resolution: int | None = None) -> float:
    """Grid sup over F_n of |S_n - approximate score| (zero outside F_n)."""
    anchor = order_statistic(ds, k)
    grid_resolution = _check_resolution(grid_resolution, ds.d)
    r = float(np.linalg.norm(anchor))
    if r == 0:
        raise DomainError(f"Order statistic k={k} sits at the origin; F_n is degenerate")
    xs = ball_grid(anchor, 2.0 * r / ds.n, grid_resolution, closed=False)
    xs = as_positions(model, xs)
    diff = xs - anchor
    anchor_term = diff * (1.0 / (model.nu + np.einsum("md,md->m", diff, diff)))[:, None]
    approx = _bulk_term(ds.n, xs, ds.n - 1.0) + anchor_term
    dev = np.linalg.norm(score_batch(model, ds, xs) - approx, axis=1)
    return float(dev.max())


def score_roughness(model: Model, ds: Dataset, z, grid_resolution: int | None = None) -> float:
    """Grid sup over the closed ball |x - z| <= 2|z|/n of (2|z|/n) |S_n(x) - n x / |x|^2|."""
    grid_resolution = _check_resolution(grid_resolution, ds.d)
    zv = as_position(model, z)
    r = float(np.linalg.norm(zv))
    if r == 0:
        raise DomainError("Roughness centre must be away from the origin")
    radius = 2.0 * r / ds.n
    xs = ball_grid(zv, radius, grid_resolution, closed=True)
    xs = xs[np.einsum("md,md->m", xs, xs) > 0]
    r2 = np.einsum("md,md->m", xs, xs)
    gap = score_batch(model, ds, xs) - ds.n * xs / r2[:, None]
    return float(radius * np.linalg.norm(gap, axis=1).max())
