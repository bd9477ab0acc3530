"""
Zig-Zag module.

Exact one-dimensional Zig-Zag simulation with canonical and subsampling
rates, exit times from micromodes and renewal quantities.
"""

from .exit import excursion_stats, exit_levels, exit_time
from .models import (
    EventLog,
    ExcursionStats,
    ExitResult,
    LevelCrossing,
    RateKind,
    StopReason,
    ThinningBound,
    ZigZagState,
)
from .rates import excess_rate, first_switch_cdf, switching_rate, thinning_bound, window_bound
from .renewal import (
    c_nu,
    gamma_bar,
    gamma_sup,
    p_tau_exact,
    p_tau_sandwich,
    phat_n,
    pn_exact,
    renewal_bootstrap,
    renewal_exit_estimate,
    return_time_bound,
)
from .simulator import DEFAULT_T_MAX, ks_distance, occupation_cdf, simulate, target_cdf

__all__ = [
    "ZigZagState",
    "RateKind",
    "ThinningBound",
    "StopReason",
    "LevelCrossing",
    "EventLog",
    "ExitResult",
    "ExcursionStats",
    "switching_rate",
    "excess_rate",
    "thinning_bound",
    "window_bound",
    "first_switch_cdf",
    "simulate",
    "occupation_cdf",
    "target_cdf",
    "ks_distance",
    "DEFAULT_T_MAX",
    "exit_time",
    "exit_levels",
    "excursion_stats",
    "pn_exact",
    "phat_n",
    "p_tau_exact",
    "gamma_sup",
    "p_tau_sandwich",
    "gamma_bar",
    "c_nu",
    "return_time_bound",
    "renewal_exit_estimate",
    "renewal_bootstrap",
]
