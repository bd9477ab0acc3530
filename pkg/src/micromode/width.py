"""Width of a certified micromode.

Along a direction v the width is the first t > 0 where v^T S_n(x_plus + v t)
stops being positive. 1D checks both directions exactly (marching plus
Brent); d >= 2 takes the minimum over sampled directions.
"""

import numpy as np
from scipy import optimize

from src.heavytail.models import Dataset
from src.posterior.approximation import sphere_directions
from src.posterior.models import Model
from src.posterior.score import score
from src.utils.errors import ContractError
from src.utils.logging import get_logger
from .models import Micromode

logger = get_logger(__name__)

DEFAULT_WIDTH_DIRECTIONS = 256


def _nearest_data_distance(ds: Dataset, x: np.ndarray) -> float:
    return float(np.sqrt(np.min(np.einsum("ij,ij->i", ds.points - x, ds.points - x))))


def first_sign_change(model: Model, ds: Dataset, origin: np.ndarray, v: np.ndarray) -> float:
    """Smallest t > 0 with v^T S_n(origin + v t) <= 0, or +inf.

    Steps grow with the distance to the nearest data point; past
    max_j |origin - Y_j| every term of the score is positive along v.
    """
    rad = model.sqrt_nu
    base_step = rad / 16.0
    t_end = float(np.max(np.linalg.norm(ds.points - origin, axis=1))) + rad

    def f(t: float) -> float:
        return float(v @ score(model, ds, origin + v * t))

    t_prev, t = 0.0, base_step
    while t_prev < t_end:
        val = f(t)
        if val <= 0:
            if val == 0:
                return t
            if t_prev == 0.0 and f(0.0) <= 0:
                return t
            return float(optimize.brentq(f, t_prev, t, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=200))
        gap = _nearest_data_distance(ds, origin + v * t)
        t_prev, t = t, t + max(base_step, 0.5 * (gap - rad))
    return float("inf")


def width(model: Model, ds: Dataset, mm: Micromode, directions: int = DEFAULT_WIDTH_DIRECTIONS) -> float:
    """W_n of a certified micromode; +inf when no direction meets a sign change.

    Raises:
        ContractError: If ``mm`` is not certified
    """
    if not mm.certified:
        raise ContractError("Width is only defined for a certified micromode")
    dirs = sphere_directions(ds.d, directions)
    w = min(first_sign_change(model, ds, mm.x_plus, v) for v in dirs)
    logger.debug(f"Width k={mm.k} over {len(dirs)} directions: {w:.6g}")
    return w


def with_measured_width(
    model: Model, ds: Dataset, mm: Micromode, directions: int = DEFAULT_WIDTH_DIRECTIONS
) -> Micromode:
    """Return ``mm`` with width and (1D) x_minus filled in.

    x_minus sits on the bulk side: x_plus - W for a right-tail anchor.
    """
    w = width(model, ds, mm, directions)
    if ds.d == 1:
        side = 1.0 if mm.anchor[0] >= 0 else -1.0
        return mm.with_width(w, float(mm.x_plus[0] - side * w), directions=2)
    return mm.with_width(w, None, directions=directions)
