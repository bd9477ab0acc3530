"""
Switching rates of the one-dimensional Zig-Zag process.

    canonical:   (nu + 1) (v sum_j S(x, Y_j))_+
    subsampling: (nu + 1) sum_j (v S(x, Y_j))_+

Their difference gamma_n(x) = (nu + 1)(sum_j S_j(x)_+ - S_n(x)_+) does not
depend on v.
"""

import numpy as np

from src.heavytail.models import Dataset
from src.posterior.models import Model
from src.utils.errors import ConfigurationError, UnsupportedDimensionError
from .models import RateKind

MAX_BOUND = 1e15


def require_1d(model: Model, ds: Dataset) -> np.ndarray:
    """Return the data as a flat array; the process is one-dimensional."""
    if ds.d != 1 or model.d != 1:
        raise UnsupportedDimensionError(f"Zig-Zag is implemented for d=1, got d={ds.d}")
    return ds.points[:, 0]


def score_terms(nu: float, y: np.ndarray, x) -> np.ndarray:
    """S(x, Y_j) for every position in ``x`` (rows) and data point (columns)."""
    u = np.asarray(x, dtype=float)[..., None] - y
    return u / (nu + u * u)


def rates_at(nu: float, y: np.ndarray, kind: RateKind, x, v: int) -> np.ndarray:
    """Vectorised switching rate over positions ``x`` at fixed velocity."""
    terms = score_terms(nu, y, x)
    if kind == RateKind.CANONICAL:
        return (nu + 1.0) * np.maximum(v * terms.sum(axis=-1), 0.0)
    return (nu + 1.0) * np.maximum(v * terms, 0.0).sum(axis=-1)


def switching_rate(model: Model, ds: Dataset, kind: RateKind, x: float, v: int) -> float:
    """lambda_n(x, v) for the chosen rate family."""
    y = require_1d(model, ds)
    return float(rates_at(model.nu, y, RateKind(kind), float(x), int(v)))


def excess_rate(model: Model, ds: Dataset, x) -> np.ndarray | float:
    """gamma_n(x), the subsampling minus canonical rate."""
    y = require_1d(model, ds)
    terms = score_terms(model.nu, y, x)
    out = (model.nu + 1.0) * (np.maximum(terms, 0.0).sum(axis=-1) - np.maximum(terms.sum(axis=-1), 0.0))
    return float(out) if np.ndim(out) == 0 else out


def thinning_bound(model: Model, ds: Dataset) -> float:
    """Global dominating intensity n (nu + 1) / (2 sqrt(nu)).

    Raises:
        ConfigurationError: If the bound is not a usable finite rate
    """
    bound = ds.n * (model.nu + 1.0) / (2.0 * model.sqrt_nu)
    if not np.isfinite(bound) or bound > MAX_BOUND:
        raise ConfigurationError(f"Thinning bound {bound:.3g} overflows for n={ds.n}, nu={model.nu}", keys=["n", "nu"])
    return float(bound)


def window_bound(nu: float, y: np.ndarray, a: float, b: float, v: int) -> float:
    """Upper bound of both rate families on the segment between a and b at velocity v.

    Each factor v S(x, Y_j) = v u / (nu + u^2) is bounded by its maximum over
    the interval of u = x - Y_j; the peak 1/(2 sqrt(nu)) sits at v u = sqrt(nu).
    """
    lo, hi = min(a, b) - y, max(a, b) - y
    if v < 0:
        lo, hi = -hi, -lo
    peak = 0.5 / np.sqrt(nu)
    at_lo = lo / (nu + lo * lo)
    at_hi = hi / (nu + hi * hi)
    sq = np.sqrt(nu)
    best = np.maximum(at_lo, at_hi)
    best = np.where((lo <= sq) & (sq <= hi), peak, best)
    return float((nu + 1.0) * np.maximum(best, 0.0).sum())


def first_switch_cdf(t, nu: float):
    """CDF of the first switch time for one data point, started on it moving outward.

    The integrated rate is (nu + 1)/2 log(1 + t^2/nu).
    """
    t = np.asarray(t, dtype=float)
    return 1.0 - np.power(1.0 + np.maximum(t, 0.0) ** 2 / nu, -0.5 * (nu + 1.0))
