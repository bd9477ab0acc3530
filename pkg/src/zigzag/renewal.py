"""
Renewal quantities for the exit problem on [x_minus, x_plus].

    p_n        = pi(x_minus) / pi(x_plus)
    p_tau      = p_n                                             (canonical)
               = p_n / (1 + int gamma_n(x) pi(x_minus)/pi(x) dx) (subsampling)
    E tau      = E eta / p_tau + (1 - p_tau)/p_tau * E T_return
    gamma_bar  = n^(1 - 1/beta) / (G + c_beta)
    C_nu       = sqrt(nu) + sqrt(nu pi)/2 * Gamma(nu/2) / Gamma((nu + 1)/2)
"""

import numpy as np
from scipy import integrate, special

from src.heavytail.models import Dataset
from src.heavytail.sampling import order_statistic
from src.posterior.models import Model
from src.posterior.score import log_density_unnorm
from src.utils.errors import DomainError
from .models import RateKind
from .rates import excess_rate, require_1d


def pn_exact(model: Model, ds: Dataset, x_minus: float, x_plus: float) -> float:
    """pi(x_minus) / pi(x_plus), computed from log densities."""
    if x_minus > x_plus:
        raise DomainError(f"x_minus={x_minus} exceeds x_plus={x_plus}")
    if x_minus == x_plus:
        return 1.0
    return float(np.exp(log_density_unnorm(model, ds, [x_minus]) - log_density_unnorm(model, ds, [x_plus])))


def phat_n(model: Model, ds: Dataset, x_minus: float, x_plus: float, y_n: float | None = None) -> float:
    """Closed-form p_n with the bulk collapsed to the origin.

    (x+/x-)^((nu+1)(n-1)) * ((nu + (x+ - Y)^2) / (nu + (x- - Y)^2))^((nu+1)/2)
    """
    require_1d(model, ds)
    if x_minus <= 0:
        raise DomainError(f"x_minus must be positive, got {x_minus}")
    y = float(order_statistic(ds, 0)[0]) if y_n is None else float(y_n)
    nu = model.nu
    log_p = (nu + 1.0) * (ds.n - 1) * (np.log(x_plus) - np.log(x_minus)) + 0.5 * (nu + 1.0) * (
        np.log(nu + (x_plus - y) ** 2) - np.log(nu + (x_minus - y) ** 2)
    )
    return float(np.exp(log_p))


def p_tau_exact(model: Model, ds: Dataset, kind: RateKind, x_minus: float, x_plus: float) -> float:
    """Probability that an excursion from (x_plus, -1) reaches x_minus before returning.

    Assumes S_n < 0 on (x_minus, x_plus), which holds between a micromode and
    its exit level.
    """
    p_n = pn_exact(model, ds, x_minus, x_plus)
    if RateKind(kind) == RateKind.CANONICAL or x_minus == x_plus:
        return p_n
    log_floor = log_density_unnorm(model, ds, [x_minus])

    def integrand(x: float) -> float:
        return float(excess_rate(model, ds, x)) * float(np.exp(log_floor - log_density_unnorm(model, ds, [x])))

    extra, _ = integrate.quad(integrand, x_minus, x_plus, limit=200)
    return p_n / (1.0 + extra)


def gamma_sup(model: Model, ds: Dataset, x_minus: float, x_plus: float, resolution: int = 2049) -> float:
    """Grid sup of gamma_n over [x_minus, x_plus]."""
    grid = np.linspace(x_minus, x_plus, resolution)
    return float(np.max(excess_rate(model, ds, grid)))


def p_tau_sandwich(p_n: float, gamma: float, width: float) -> tuple[float, float]:
    """(p_n / (1 + gamma W), p_n)."""
    return p_n / (1.0 + gamma * width), p_n


def gamma_bar(n: int, beta: float, g: float, c_b: float) -> float:
    """n^(1 - 1/beta) / (G + c_beta)."""
    if not g + c_b > 0:
        raise DomainError(f"G + c_beta must be positive, got {g + c_b}")
    return float(np.exp((1.0 - 1.0 / beta) * np.log(n)) / (g + c_b))


def c_nu(nu: float) -> float:
    """sqrt(nu) + sqrt(nu pi)/2 * Gamma(nu/2) / Gamma((nu+1)/2)."""
    if not nu > 0:
        raise DomainError(f"nu must be positive, got {nu}")
    ratio = np.exp(special.gammaln(0.5 * nu) - special.gammaln(0.5 * (nu + 1.0)))
    return float(np.sqrt(nu) + 0.5 * np.sqrt(nu * np.pi) * ratio)


def return_time_bound(nu: float, gamma: float) -> float:
    """sqrt(nu) + (2 sqrt(nu) + C_nu) exp(sqrt(nu)(nu + 1) gamma), bounding E T_return."""
    sqrt_nu = float(np.sqrt(nu))
    return sqrt_nu + (2.0 * sqrt_nu + c_nu(nu)) * float(np.exp(sqrt_nu * (nu + 1.0) * gamma))


def renewal_exit_estimate(p_tau: float, mean_eta: float, mean_return: float) -> float:
    """Mean exit time from the renewal decomposition; +inf when p_tau is zero."""
    if p_tau <= 0:
        return float("inf")
    return mean_eta / p_tau + (1.0 - p_tau) / p_tau * mean_return


def renewal_bootstrap(
    p_tau: float,
    eta_samples: np.ndarray,
    return_samples: np.ndarray,
    rng: np.random.Generator,
    n_resamples: int,
) -> np.ndarray:
    """Renewal mean exit times over bootstrap resamples of the excursion and return times.

    Each resample redraws the excursion durations and the return times with
    replacement and feeds their means, with the exact ``p_tau``, through
    :func:`renewal_exit_estimate`. No return samples means a zero mean return.

    Raises:
        DomainError: If there are no excursion samples or ``n_resamples`` < 1
    """
    eta = np.asarray(eta_samples, dtype=float)
    ret = np.asarray(return_samples, dtype=float)
    if eta.size == 0:
        raise DomainError("Bootstrap needs at least one excursion")
    if n_resamples < 1:
        raise DomainError(f"n_resamples must be >= 1, got {n_resamples}")
    out = np.empty(n_resamples)
    for b in range(n_resamples):
        mean_eta = float(rng.choice(eta, size=eta.size).mean())
        mean_ret = float(rng.choice(ret, size=ret.size).mean()) if ret.size else 0.0
        out[b] = renewal_exit_estimate(p_tau, mean_eta, mean_ret)
    return out
