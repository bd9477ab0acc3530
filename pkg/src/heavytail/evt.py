"""
Extreme-value constants and diagnostics for multivariate-t radii.

The radial density h(t) of the standard multivariate t satisfies
t^(beta+d) h(t) -> K(beta, d); the top order statistics then scale like
n^(1/beta) with Gamma limits for A (|Y_(n-k)| / n^(1/beta))^(-beta).
"""

import numpy as np
from scipy import special, stats

from src.utils.errors import ConfigurationError, DomainError
from .models import Dataset
from .sampling import order_radius


def tail_constant_K(beta: float, d: int) -> float:
    """K(beta, d) = beta^((beta+d)/2) Gamma((beta+d)/2) / (Gamma(beta/2) (beta pi)^(d/2))."""
    log_k = (
        0.5 * (beta + d) * np.log(beta)
        + special.gammaln(0.5 * (beta + d))
        - special.gammaln(0.5 * beta)
        - 0.5 * d * np.log(beta * np.pi)
    )
    return float(np.exp(log_k))


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^(d-1) (2 for d=1)."""
    return float(2.0 * np.pi ** (0.5 * d) / special.gamma(0.5 * d))


def evt_constant_A(beta: float, d: int) -> float:
    """A = omega_(d-1) K(beta, d) / beta."""
    return sphere_area(d) * tail_constant_K(beta, d) / beta


def radial_density(t, beta: float, d: int):
    """h(t) with p(y) = h(|y|) for the standard multivariate t."""
    t = np.asarray(t, dtype=float)
    log_c = special.gammaln(0.5 * (beta + d)) - special.gammaln(0.5 * beta) - 0.5 * d * np.log(beta * np.pi)
    return np.exp(log_c - 0.5 * (beta + d) * np.log1p(t * t / beta))


def radial_cdf(r, beta: float, d: int):
    """CDF of |Y|; |Y|^2 / d follows an F(d, beta) law."""
    r = np.asarray(r, dtype=float)
    return stats.f.cdf(r * r / d, d, beta)


def frechet_limit_cdf(r, beta: float):
    """Limit law exp(-r^(-beta)) of max |Y_j| / (A n)^(1/beta)."""
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(r > 0, np.exp(-np.power(np.maximum(r, 1e-300), -beta)), 0.0)


def _beta_of(ds: Dataset, beta: float | None) -> float:
    if beta is not None:
        return float(beta)
    if ds.beta is None:
        raise ConfigurationError("Dataset has no generation provenance; pass beta explicitly", keys=["beta"])
    return ds.beta


def gk_proxy(ds: Dataset, k: int, beta: float | None = None) -> float:
    """Finite-n plug-in for G_k: A (|Y_(n-k)| / n^(1/beta))^(-beta).

    Args:
        ds: Dataset
        k: Order index from the top
        beta: Tail index; defaults to the dataset provenance

    Raises:
        DomainError: If Y_(n-k) is the origin
    """
    b = _beta_of(ds, beta)
    r = order_radius(ds, k)
    if r <= 0:
        raise DomainError(f"Order statistic k={k} sits at the origin")
    return float(np.exp(np.log(evt_constant_A(b, ds.d)) + np.log(ds.n) - b * np.log(r)))


def radial_scale(ds: Dataset, k: int, beta: float | None = None) -> float:
    """|Y_(n-k)| / n^(1/beta), the scale the micromode location and width bounds follow."""
    b = _beta_of(ds, beta)
    r = order_radius(ds, k)
    if r <= 0:
        raise DomainError(f"Order statistic k={k} sits at the origin")
    return float(np.exp(np.log(r) - np.log(ds.n) / b))
