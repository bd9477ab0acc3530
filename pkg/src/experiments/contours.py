"""
Two-dimensional log-density grids and the regression ridge search.

Grids are plot-ready data: ``logpi[i, j]`` is the unnormalised log
posterior at ``(x1[i], x2[j])``. The regression demo evaluates

    log pi(x) = -(nu + 1)/2 * sum_j log(nu + (y_j - A_j . x)^2)

and searches for local maxima along the lines {x : A_i . x = y_i} of the
largest responses.
"""

from dataclasses import dataclass
from math import comb

import numpy as np
import pandas as pd
from scipy import ndimage, optimize

from src.heavytail.models import DataConfig, Dataset
from src.heavytail.sampling import sample_dataset
from src.posterior.models import Model
from src.posterior.score import log_density_batch
from src.utils.errors import ConfigurationError, UnsupportedDimensionError
from src.utils.logging import get_logger
from src.utils.rng import derive_seed, make_rng

logger = get_logger(__name__)

MAX_RESOLUTION = 2048
_ROW_BUDGET = 1 << 22

# far-field series: data with |u| <= _FAR_CUT over the whole window, total remainder <= _SERIES_TOL
_FAR_CUT = 0.05
_MAX_ORDER = 12
_SERIES_TOL = 1e-9


@dataclass(frozen=True)
class ContourGrid:
    """Log density over a regular grid."""

    x1: np.ndarray
    x2: np.ndarray
    logpi: np.ndarray

    @property
    def resolution(self) -> int:
        return self.x1.size

    def point(self, i: int, j: int) -> np.ndarray:
        return np.array([self.x1[i], self.x2[j]])

    def to_frame(self) -> pd.DataFrame:
        """Flat (x1, x2, logpi) triples, x2 varying fastest."""
        g1, g2 = np.meshgrid(self.x1, self.x2, indexing="ij")
        return pd.DataFrame({"x1": g1.ravel(), "x2": g2.ravel(), "logpi": self.logpi.ravel()})


@dataclass(frozen=True)
class RegressionSpec:
    """Linear regression y_j = A_j . x + eps_j with heavy-tailed noise."""

    design: np.ndarray
    response: np.ndarray
    noise_dof: float
    seed: int

    @property
    def n(self) -> int:
        return self.response.size


@dataclass(frozen=True)
class RidgeMaximum:
    """A local maximum of the log posterior restricted to a line A_i . x = y_i.

    ``polished`` is the nearby 2D local maximum found by a quasi-Newton
    polish; ``polished_distance`` is its distance to the line.
    """

    line: int
    s: float
    point: np.ndarray
    log_density: float
    polished: np.ndarray | None = None
    polished_distance: float = float("nan")
    polish_converged: bool = False

    def to_dict(self) -> dict:
        return {
            "line": self.line,
            "s": self.s,
            "x1": float(self.point[0]),
            "x2": float(self.point[1]),
            "log_density": self.log_density,
            "polished_x1": None if self.polished is None else float(self.polished[0]),
            "polished_x2": None if self.polished is None else float(self.polished[1]),
            "polished_distance": self.polished_distance,
            "polish_converged": self.polish_converged,
        }


def simulate_regression(n: int, noise_dof: float, seed: int, truth=(0.0, 0.0)) -> RegressionSpec:
    """Gaussian covariates A_j ~ N(0, I_2) and multivariate-t noise with ``noise_dof`` degrees of freedom."""
    design = make_rng(seed, 0).standard_normal((n, 2))
    noise = sample_dataset(DataConfig(beta=noise_dof, d=1, n=n, seed=derive_seed(seed, 1))).points[:, 0]
    response = design @ np.asarray(truth, dtype=float) + noise
    return RegressionSpec(design=design, response=response, noise_dof=float(noise_dof), seed=seed)


def regression_log_posterior(reg: RegressionSpec, nu: float, xs) -> np.ndarray:
    """Unnormalised log posterior at each row of ``xs`` (shape (m, 2))."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    out = np.zeros(xs.shape[0])
    step = max(1, _ROW_BUDGET // max(xs.shape[0], 1))
    for start in range(0, reg.n, step):
        sl = slice(start, min(reg.n, start + step))
        resid = reg.response[None, sl] - xs @ reg.design[sl].T
        out += np.log(nu + resid**2).sum(axis=1)
    return -0.5 * (nu + 1.0) * out


def regression_gradient(reg: RegressionSpec, nu: float, x) -> np.ndarray:
    resid = reg.response - reg.design @ np.asarray(x, dtype=float)
    return (nu + 1.0) * (resid / (nu + resid**2)) @ reg.design


def _series_order(ubar: np.ndarray) -> int | None:
    """Smallest order whose summed log1p remainder bound is within tolerance."""
    if ubar.size == 0:
        return None
    for order in range(1, _MAX_ORDER + 1):
        bound = float(np.sum(ubar ** (order + 1) / ((order + 1) * (1.0 - ubar))))
        if bound <= _SERIES_TOL:
            return order
    return None


def _log1p_series(xp: np.ndarray, yp: np.ndarray, q: np.ndarray, order: int) -> np.ndarray:
    """sum_j log1p(u_j) at each row of ``xp``, truncated after ``order`` terms.

    u_j = s alpha_j + x'.b_j with s = |x'|^2, alpha_j = 1/Q_j and b_j = -2 Y'_j / Q_j,
    so every power of u_j expands into monomials of (s, x'_1, x'_2) whose
    coefficients are moments of the far data.
    """
    alpha = 1.0 / q
    b = -2.0 * yp / q[:, None]
    s = np.einsum("ij,ij->i", xp, xp)
    powers = np.arange(order + 1)[:, None]
    s_pow, x1_pow, x2_pow = s[None, :] ** powers, xp[None, :, 0] ** powers, xp[None, :, 1] ** powers
    a_pow, b1_pow, b2_pow = alpha[None, :] ** powers, b[None, :, 0] ** powers, b[None, :, 1] ** powers

    out = np.zeros(xp.shape[0])
    for k in range(1, order + 1):
        term = np.zeros(xp.shape[0])
        for a in range(k + 1):
            m = k - a
            for c in range(m + 1):
                moment = float(np.sum(a_pow[a] * b1_pow[c] * b2_pow[m - c]))
                term += comb(k, a) * comb(m, c) * moment * (s_pow[a] * x1_pow[c] * x2_pow[m - c])
        out += (-1.0) ** (k + 1) / k * term
    return out


def window_log_density(model: Model, ds: Dataset, xs, centre) -> np.ndarray:
    """Unnormalised log density at positions close to ``centre`` (two-dimensional data).

    With x' = x - c, Y' = Y - c and Q = nu + |Y'|^2 every factor splits as

        log(nu + |x - Y|^2) = log Q + log1p(u),    u = (|x'|^2 - 2 x'.Y') / Q

    Points with |u| <= 0.05 on the whole window enter through a truncated
    log1p series whose coefficients are moments of the far data, at the
    lowest order whose remainder bound sums below 1e-9. The remaining points
    are evaluated pair by pair. Falls back to the exact sum when no order
    meets the tolerance.

    Raises:
        UnsupportedDimensionError: If the dataset is not two-dimensional
    """
    if ds.d != 2 or model.d != 2:
        raise UnsupportedDimensionError(f"Window evaluation is two-dimensional, got d={ds.d}")
    xs = np.asarray(xs, dtype=float)
    centre = np.asarray(centre, dtype=float)
    xp = xs - centre
    yp = ds.points - centre
    q = model.nu + np.einsum("ij,ij->i", yp, yp)
    r = float(np.sqrt(np.max(np.einsum("ij,ij->i", xp, xp))))
    ubar = (r * r + 2.0 * r * np.sqrt(q - model.nu)) / q
    far = ubar <= _FAR_CUT
    order = _series_order(ubar[far])
    if order is None:
        return log_density_batch(model, ds, xs)

    far_sum = float(np.sum(np.log(q[far]))) + _log1p_series(xp, yp[far], q[far], order)
    out = -model.exponent * far_sum
    if not far.all():
        out += log_density_batch(model, Dataset.from_points(ds.points[~far]), xs)
    logger.debug(f"Window evaluation: {int(far.sum())} far points at order {order}, {int((~far).sum())} near")
    return out


def contour_grid(
    model: Model,
    target: Dataset | RegressionSpec,
    bbox: tuple[float, float, float, float],
    resolution: int,
) -> ContourGrid:
    """Evaluate the log posterior on a resolution x resolution grid.

    Args:
        model: Likelihood parameters (``nu`` is also used for the regression)
        target: Two-dimensional dataset or regression problem
        bbox: (x1_min, x1_max, x2_min, x2_max)
        resolution: Points per axis, at most 2048

    Raises:
        ConfigurationError: If the grid is oversized or degenerate
        UnsupportedDimensionError: If the dataset is not two-dimensional
    """
    if not 2 <= resolution <= MAX_RESOLUTION:
        raise ConfigurationError(
            f"resolution must lie in [2, {MAX_RESOLUTION}], got {resolution}", keys=["resolution"]
        )
    lo1, hi1, lo2, hi2 = (float(b) for b in bbox)
    if not (lo1 < hi1 and lo2 < hi2):
        raise ConfigurationError(f"Degenerate bounding box {bbox}", keys=["bbox"])
    if isinstance(target, Dataset) and target.d != 2:
        raise UnsupportedDimensionError(f"Contour grids are two-dimensional, got d={target.d}")

    x1 = np.linspace(lo1, hi1, resolution)
    x2 = np.linspace(lo2, hi2, resolution)
    g1, g2 = np.meshgrid(x1, x2, indexing="ij")
    xs = np.column_stack([g1.ravel(), g2.ravel()])
    if isinstance(target, Dataset):
        values = window_log_density(model, target, xs, ((lo1 + hi1) / 2.0, (lo2 + hi2) / 2.0))
    else:
        values = regression_log_posterior(target, model.nu, xs)
    logger.debug(f"Evaluated {resolution}x{resolution} grid over {bbox}")
    return ContourGrid(x1=x1, x2=x2, logpi=values.reshape(resolution, resolution))


def grid_local_maxima(grid: ContourGrid) -> list[tuple[int, int]]:
    """Interior grid points strictly above all eight neighbours."""
    footprint = np.ones((3, 3), dtype=bool)
    footprint[1, 1] = False
    neighbours = ndimage.maximum_filter(grid.logpi, footprint=footprint, mode="constant", cval=-np.inf)
    strict = grid.logpi > neighbours
    strict[[0, -1], :] = False
    strict[:, [0, -1]] = False
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(strict), strict=True)]


def _line(reg: RegressionSpec, i: int) -> tuple[np.ndarray, np.ndarray]:
    a = reg.design[i]
    norm2 = float(a @ a)
    foot = reg.response[i] * a / norm2
    direction = np.array([-a[1], a[0]]) / np.sqrt(norm2)
    return foot, direction


def ridge_maxima(
    reg: RegressionSpec,
    nu: float,
    lines: int = 2,
    half_length: float | None = None,
    points: int = 4097,
    polish: bool = True,
) -> dict[int, list[RidgeMaximum]]:
    """Local maxima along the lines A_i . x = y_i of the ``lines`` largest |y_i|.

    Each line is parameterised as foot + s * u, where foot is the point of the
    line closest to the origin and u its unit direction. Interior strict
    maxima of the profile on ``points`` values of s in [-L, L] are refined
    with a bounded scalar search, then polished to 2D local maxima.

    Returns:
        Mapping from observation index to the maxima found on its line
    """
    order = np.argsort(-np.abs(reg.response), kind="stable")[:lines]
    found: dict[int, list[RidgeMaximum]] = {}
    for i in (int(j) for j in order):
        foot, u = _line(reg, i)
        length = half_length if half_length is not None else max(10.0 * np.sqrt(nu), float(np.linalg.norm(foot)))
        s = np.linspace(-length, length, points)
        profile = regression_log_posterior(reg, nu, foot[None, :] + s[:, None] * u[None, :])
        interior = np.nonzero((profile[1:-1] > profile[:-2]) & (profile[1:-1] > profile[2:]))[0] + 1

        maxima = []
        for m in interior:
            res = optimize.minimize_scalar(
                lambda t, foot=foot, u=u: -regression_log_posterior(reg, nu, foot + t * u)[0],
                bounds=(s[m - 1], s[m + 1]),
                method="bounded",
            )
            x = foot + res.x * u
            mx = RidgeMaximum(line=i, s=float(res.x), point=x, log_density=float(-res.fun))
            if polish:
                mx = _polish(reg, nu, mx)
            maxima.append(mx)
        logger.info(f"Line of observation {i} (|y|={abs(reg.response[i]):.4g}): {len(maxima)} local maxima")
        found[i] = maxima
    return found


def _polish(reg: RegressionSpec, nu: float, mx: RidgeMaximum) -> RidgeMaximum:
    res = optimize.minimize(
        lambda x: -regression_log_posterior(reg, nu, x)[0],
        mx.point,
        jac=lambda x: -regression_gradient(reg, nu, x),
        method="BFGS",
    )
    a = reg.design[mx.line]
    distance = abs(float(a @ res.x) - reg.response[mx.line]) / float(np.linalg.norm(a))
    return RidgeMaximum(
        line=mx.line,
        s=mx.s,
        point=mx.point,
        log_density=mx.log_density,
        polished=np.asarray(res.x, dtype=float),
        polished_distance=distance,
        polish_converged=bool(res.success),
    )
