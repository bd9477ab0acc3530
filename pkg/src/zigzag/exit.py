"""Exit times and renewal excursions from a certified micromode.

Micromodes anchored on the negative side are handled on the mirrored
dataset, so the bulk always lies to the left of x_plus.
"""

import numpy as np

from src.heavytail.models import Dataset
from src.micromode.models import Micromode
from src.posterior.models import Model
from src.utils.errors import ContractError, DomainError
from src.utils.logging import get_logger
from .models import ExcursionStats, ExitResult, LevelCrossing, RateKind, StopReason, ThinningBound, ZigZagState
from .rates import require_1d
from .simulator import DEFAULT_T_MAX, simulate

logger = get_logger(__name__)


def exit_levels(model: Model, ds: Dataset, mm: Micromode) -> tuple[Dataset, float, float]:
    """Right-tail dataset with the exit level x_minus and the start x_plus.

    Raises:
        ContractError: If ``mm`` is not certified
        DomainError: If the width is not finite
    """
    if not mm.certified:
        raise ContractError("Exit analysis needs a certified micromode")
    require_1d(model, ds)
    if not np.isfinite(mm.width):
        raise DomainError("Micromode has unbounded width; there is no exit level")
    if mm.anchor[0] < 0:
        ds, x_plus = ds.mirrored(), -float(mm.x_plus[0])
    else:
        x_plus = float(mm.x_plus[0])
    return ds, x_plus - mm.width, x_plus


def exit_time(
    model: Model,
    ds: Dataset,
    kind: RateKind,
    mm: Micromode,
    rng: np.random.Generator,
    t_max: float = DEFAULT_T_MAX,
    *,
    thinning: ThinningBound = ThinningBound.GLOBAL,
    keep_log: bool = False,
) -> ExitResult:
    """First time the process started at (x_plus, -1) reaches x_minus; ``keep_log`` attaches the skeleton."""
    ds_r, x_minus, x_plus = exit_levels(model, ds, mm)
    log = simulate(
        model,
        ds_r,
        kind,
        ZigZagState(x=x_plus, v=-1),
        [LevelCrossing(x_minus, -1, StopReason.EXIT_LEFT)],
        t_max,
        rng,
        thinning=thinning,
    )
    censored = log.stop_reason == StopReason.CENSORED
    returned = bool(np.any((log.velocities == -1) & (log.positions >= x_plus)))
    return ExitResult(
        tau=log.final_state.t - log.initial_state.t,
        censored=censored,
        n_switches=log.n_switches,
        first_excursion_exit=not censored and not returned,
        proposals=log.proposals,
        log=log if keep_log else None,
    )


def excursion_stats(
    model: Model,
    ds: Dataset,
    kind: RateKind,
    mm: Micromode,
    rng: np.random.Generator,
    n_excursions: int,
    t_max: float = DEFAULT_T_MAX,
    *,
    thinning: ThinningBound = ThinningBound.GLOBAL,
) -> ExcursionStats:
    """Run excursions from (x_plus, -1) until x_minus or back to x_plus.

    Each excursion that returns is followed by one return-time sample: the
    time from (x_plus, +1) until the process comes back down to x_plus.
    """
    ds_r, x_minus, x_plus = exit_levels(model, ds, mm)
    excursion_stops = [
        LevelCrossing(x_minus, -1, StopReason.EXIT_LEFT),
        LevelCrossing(x_plus, 1, StopReason.RETURNED_TO_START),
    ]
    return_stops = [LevelCrossing(x_plus, -1, StopReason.RETURNED_TO_START)]

    eta, exited, returns = [], [], []
    censored_exc = censored_ret = 0
    for _ in range(n_excursions):
        log = simulate(model, ds_r, kind, ZigZagState(x=x_plus, v=-1), excursion_stops, t_max, rng, thinning=thinning)
        eta.append(log.final_state.t - log.initial_state.t)
        exited.append(log.stop_reason == StopReason.EXIT_LEFT)
        if log.stop_reason == StopReason.CENSORED:
            censored_exc += 1
            continue
        if log.stop_reason == StopReason.RETURNED_TO_START:
            back = simulate(model, ds_r, kind, ZigZagState(x=x_plus, v=1), return_stops, t_max, rng, thinning=thinning)
            returns.append(back.final_state.t - back.initial_state.t)
            censored_ret += int(back.stop_reason == StopReason.CENSORED)

    if censored_exc or censored_ret:
        logger.warning(f"{censored_exc} excursions and {censored_ret} returns hit t_max={t_max:g}")
    return ExcursionStats(
        eta_samples=np.asarray(eta, dtype=float),
        exited=np.asarray(exited, dtype=bool),
        t_return_samples=np.asarray(returns, dtype=float),
        censored_excursions=censored_exc,
        censored_returns=censored_ret,
    )
