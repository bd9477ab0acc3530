"""Slope fits and distribution checks used by the study summaries."""

import numpy as np
from scipy import stats

from .models import SlopeFit


def fit_loglog(x, y, target: float | None = None) -> SlopeFit | None:
    """Fit log y = intercept + slope log x over the positive finite pairs.

    Returns None when fewer than two distinct x values remain.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = np.isfinite(x) & np.isfinite(y) & (x > 0) & (y > 0)
    x, y = x[mask], y[mask]
    if np.unique(x).size < 2:
        return None
    res = stats.linregress(np.log(x), np.log(y))
    return SlopeFit(
        slope=float(res.slope),
        intercept=float(res.intercept),
        slope_stderr=float(res.stderr),
        intercept_stderr=float(res.intercept_stderr),
        n_points=int(x.size),
        target=target,
    )


def spearman(x, y) -> float:
    """Spearman rank correlation; nan for fewer than three pairs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = np.isfinite(x) & np.isfinite(y)
    if mask.sum() < 3:
        return float("nan")
    return float(stats.spearmanr(x[mask], y[mask])[0])


def box_stats(values) -> dict[str, float]:
    """Minimum, quartiles and maximum."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return {key: float("nan") for key in ("min", "q1", "median", "q3", "max")}
    q = np.percentile(v, [0, 25, 50, 75, 100])
    return dict(zip(("min", "q1", "median", "q3", "max"), (float(v) for v in q), strict=True))


def ks_gamma(values, shape: float) -> tuple[float, float]:
    """Kolmogorov-Smirnov statistic and p-value against Gamma(shape, 1)."""
    res = stats.kstest(np.asarray(values, dtype=float), stats.gamma(a=shape).cdf)
    return float(res.statistic), float(res.pvalue)
