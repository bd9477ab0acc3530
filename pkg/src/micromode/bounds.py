"""
Quantitative micromode bounds and conditioning events.

    c_beta  = 0 for 0 < beta < 1, 2 sqrt(nu) for beta = 1
    d_n     = n^(1 - 1/beta) / m1
    d_n^+-  = (1 -+ sqrt(1 - 4 d_n^2 nu)) / (2 d_n)

Location:  |Y_(n-k) - x_plus| <= 4 nu / (G + c_beta) * n^(1 - 1/beta)
Width:     (G + c_beta)/2 * n^(1/beta - 1) - 2 sqrt(nu) < W_n < 4 G n^(1/beta - 1) + sqrt(nu)
"""

import numpy as np

from src.heavytail.evt import gk_proxy, radial_scale
from src.heavytail.models import Dataset
from src.heavytail.sampling import isolation_gap, order_radius
from src.posterior.approximation import score_deviation_sup
from src.posterior.models import Model
from src.utils.errors import ConfigurationError, ContractError, DomainError
from src.utils.logging import get_logger
from .models import BoundsReport, DnCertificate, EventFlags, Micromode

logger = get_logger(__name__)

PROXIES = ("gamma", "radial")


def c_beta(beta: float, nu: float) -> float:
    """Offset c_beta of the location bound; defined for 0 < beta <= 1."""
    if not 0 < beta <= 1:
        raise DomainError(f"c_beta is defined for 0 < beta <= 1, got beta={beta}")
    return 2.0 * float(np.sqrt(nu)) if beta == 1 else 0.0


def dn_roots(d_n: float, nu: float) -> tuple[float, float, bool]:
    """Roots d_n^+ <= d_n^- of d_n t^2 - t + d_n nu; (nan, nan, False) when not real."""
    disc = 1.0 - 4.0 * d_n * d_n * nu
    if disc < 0:
        return float("nan"), float("nan"), False
    root = float(np.sqrt(disc))
    # d_n^+ d_n^- = nu; this form keeps d_n^+ accurate for tiny d_n
    plus = 2.0 * d_n * nu / (1.0 + root)
    minus = (1.0 + root) / (2.0 * d_n)
    return plus, minus, True


def default_m1(g: float, beta: float, nu: float) -> float:
    """m1 = (G + c_beta) / 2."""
    return 0.5 * (g + c_beta(beta, nu))


def dn_bounds(n: int, beta: float, nu: float, m1: float) -> DnCertificate:
    """Evaluate d_n and d_n^+-; a non-real pair is reported with ``real=False``.

    Raises:
        DomainError: If m1 <= c_beta
    """
    cb = c_beta(beta, nu)
    if m1 <= cb:
        raise DomainError(f"m1={m1} must exceed c_beta={cb}")
    d_n = float(np.exp((1.0 - 1.0 / beta) * np.log(n)) / m1)
    plus, minus, real = dn_roots(d_n, nu)
    return DnCertificate(d_n=d_n, d_n_plus=plus, d_n_minus=minus, m1=m1, real=real)


def critical_nu(beta: float) -> float:
    """beta / (1 - beta): micromodes are essential for nu above this value."""
    if not 0 < beta < 1:
        raise DomainError(f"critical nu is defined for 0 < beta < 1, got {beta}")
    return beta / (1.0 - beta)


def is_essential(beta: float, nu: float) -> bool:
    """True when the expected exit time outgrows the travel time |Y_(n)|."""
    return nu > critical_nu(beta)


def arrhenius_exponent(beta: float, nu: float) -> float:
    """Growth exponent (1/beta - 1)(nu + 1) of the mean exit time in n."""
    return (1.0 / beta - 1.0) * (nu + 1.0)


def g_proxy(ds: Dataset, k: int, beta: float | None = None, proxy: str = "gamma") -> float:
    """Plug-in for G_k: ``gamma`` is A (|Y_(n-k)|/n^(1/beta))^(-beta); ``radial`` is |Y_(n-k)|/n^(1/beta)."""
    if proxy == "gamma":
        return gk_proxy(ds, k, beta)
    if proxy == "radial":
        return radial_scale(ds, k, beta)
    raise ConfigurationError(f"Unknown proxy '{proxy}', expected one of {PROXIES}", keys=["bounds_proxy"])


def _beta(ds: Dataset, beta: float | None) -> float:
    if beta is not None:
        return float(beta)
    if ds.beta is None:
        raise ConfigurationError("Dataset has no generation provenance; pass beta explicitly", keys=["beta"])
    return ds.beta


def theorem_bounds_check(
    model: Model,
    ds: Dataset,
    mm: Micromode,
    g: float,
    beta: float | None = None,
) -> BoundsReport:
    """Check the location bound and the width sandwich with ``g`` in place of G_k.

    Args:
        model: Likelihood parameters
        ds: Dataset
        mm: Certified micromode with a measured width
        g: Plug-in value for G_k
        beta: Tail index; defaults to the dataset provenance

    Returns:
        BoundsReport with booleans and margins (positive margin means the
        inequality holds)
    """
    if not mm.certified:
        raise ContractError("Bounds are only checked for a certified micromode")
    b = _beta(ds, beta)
    cb = c_beta(b, model.nu)
    report = BoundsReport(g=float(g), c_beta=cb)
    if not g > cb:
        report.event_a_violated = True
        return report

    n = ds.n
    growth = float(np.exp((1.0 / b - 1.0) * np.log(n)))
    sqrt_nu = model.sqrt_nu

    loc = float(np.linalg.norm(mm.anchor - mm.x_plus))
    loc_bound = 4.0 * model.nu / (g + cb) / growth
    lo = 0.5 * (g + cb) * growth - 2.0 * sqrt_nu
    hi = 4.0 * g * growth + sqrt_nu

    report.margins = {
        "location": loc_bound - loc,
        "width_lo": mm.width - lo,
        "width_hi": hi - mm.width,
    }
    report.location_ok = loc <= loc_bound
    report.width_lo_ok = lo < mm.width
    report.width_hi_ok = mm.width < hi
    return report


def event_flags(
    model: Model,
    ds: Dataset,
    k: int,
    eps: float = 0.25,
    delta: float = 0.25,
    beta: float | None = None,
    proxy: str = "gamma",
    grid_resolution: int | None = None,
) -> EventFlags:
    """Evaluate A_n, A'_n, B_n and A around Y_(n-k).

    A_n:  |Y_(n-k)| > 2 n sqrt(nu)
    A'_n: isolation gap > |Y_(n-k)| / (2 n^eps)
    B_n:  grid sup of |S_n - approximate score| < n^(1 - 1/beta - delta)
    A:    G proxy > c_beta
    """
    for name, val in (("eps", eps), ("delta", delta)):
        if not 0 < val < 0.5:
            raise ConfigurationError(f"{name} must lie in (0, 1/2), got {val}", keys=[name])
    b = _beta(ds, beta)
    n = ds.n
    r = order_radius(ds, k)

    a_n = r > 2.0 * n * model.sqrt_nu
    a_prime = isolation_gap(ds, k) > r / (2.0 * n**eps)
    if r > 0:
        b_n = score_deviation_sup(model, ds, k, grid_resolution) < n ** (1.0 - 1.0 / b - delta)
        g = g_proxy(ds, k, b, proxy)
    else:
        b_n, g = False, 0.0
    try:
        a = g > c_beta(b, model.nu)
    except DomainError:
        # beta > 1: the micromode theorems do not apply
        a = False
    return EventFlags(a_n=bool(a_n), a_prime_n=bool(a_prime), b_n=bool(b_n), a=bool(a))
