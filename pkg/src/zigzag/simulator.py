"""
Exact simulation of the one-dimensional Zig-Zag process by Poisson thinning.

Between switches the position moves at unit speed. Proposal times come from
a homogeneous Poisson stream dominating the switching rate and are drawn in
batches; the first accepted proposal becomes the next switch. Stop rules are
level crossings solved exactly on the current linear segment.
"""

from collections.abc import Sequence

import numpy as np
from scipy import integrate, stats

from src.heavytail.models import Dataset
from src.posterior.models import Model
from src.posterior.score import log_density_batch
from src.utils.errors import ConfigurationError
from src.utils.logging import get_logger
from .models import EventLog, LevelCrossing, RateKind, StopReason, ThinningBound, ZigZagState
from .rates import rates_at, require_1d, thinning_bound, window_bound

logger = get_logger(__name__)

DEFAULT_T_MAX = 1e6
DEFAULT_BATCH = 256


class _Thinner:
    """Draws the next switch time along a segment for one rate family and bound."""

    def __init__(self, model: Model, ds: Dataset, kind: RateKind, bound: ThinningBound, rng, batch: int):
        self.nu = model.nu
        self.y = require_1d(model, ds)
        self.n = ds.n
        self.kind = RateKind(kind)
        self.bound = ThinningBound(bound)
        self.rng = rng
        self.batch = batch
        self.global_rate = thinning_bound(model, ds)
        self.sorted_y = np.sort(self.y)
        self.proposals = 0

    def _nearest_gap(self, x: float) -> float:
        i = np.searchsorted(self.sorted_y, x)
        gaps = [abs(x - self.sorted_y[j]) for j in (i - 1, i) if 0 <= j < self.n]
        return min(gaps)

    def _accept(self, xs: np.ndarray, v: int, rate: float, exact: bool) -> np.ndarray:
        u = self.rng.random(xs.size)
        if self.kind == RateKind.SUBSAMPLING and not exact:
            # one uniformly drawn data point per proposal
            idx = self.rng.integers(0, self.n, size=xs.size)
            diff = xs - self.y[idx]
            factor = self.n * (self.nu + 1.0) * np.maximum(v * diff / (self.nu + diff * diff), 0.0)
            return u * rate < factor
        return u * rate < rates_at(self.nu, self.y, self.kind, xs, v)

    def _run(self, x: float, v: int, horizon: float, rate: float, exact: bool) -> float | None:
        """First accepted proposal time in (0, horizon] under a constant bound, or None."""
        if rate <= 0:
            return None
        elapsed = 0.0
        while True:
            gaps = self.rng.exponential(1.0 / rate, size=self.batch)
            times = elapsed + np.cumsum(gaps)
            inside = times <= horizon
            count = int(inside.sum())
            if count:
                hits = np.flatnonzero(self._accept(x + v * times[:count], v, rate, exact))
                if hits.size:
                    self.proposals += int(hits[0]) + 1
                    return float(times[hits[0]])
                self.proposals += count
            if count < self.batch:
                return None
            elapsed = float(times[-1])

    def next_switch(self, x: float, v: int, horizon: float) -> float | None:
        """Time of the next switch from (x, v) within ``horizon``, or None."""
        if self.bound == ThinningBound.GLOBAL:
            return self._run(x, v, horizon, self.global_rate, exact=False)

        sqrt_nu = np.sqrt(self.nu)
        done = 0.0
        while done < horizon:
            here = x + v * done
            window = min(horizon - done, max(0.25 * sqrt_nu, 0.5 * self._nearest_gap(here)))
            rate = window_bound(self.nu, self.y, here, here + v * window, v)
            hit = self._run(here, v, window, rate, exact=True)
            if hit is not None:
                return done + hit
            done += window
        return None


def simulate(
    model: Model,
    ds: Dataset,
    kind: RateKind,
    init: ZigZagState,
    stop: Sequence[LevelCrossing] = (),
    t_max: float = DEFAULT_T_MAX,
    rng: np.random.Generator | None = None,
    *,
    thinning: ThinningBound = ThinningBound.GLOBAL,
    max_events: int | None = None,
    batch_size: int = DEFAULT_BATCH,
) -> EventLog:
    """Simulate a Zig-Zag trajectory until a stop rule fires or ``t_max``.

    Args:
        model: Likelihood parameters (d=1)
        ds: Dataset (d=1)
        kind: Canonical or subsampling rates
        init: Initial state
        stop: Level-crossing stop rules
        t_max: Process-time horizon
        rng: Random generator for this trajectory
        thinning: Dominating bound, global or windowed
        max_events: Stop after this many switches
        batch_size: Proposals drawn per batch

    Returns:
        EventLog. Reaching ``t_max`` is HORIZON without stop rules and
        CENSORED with them.
    """
    if not t_max > 0:
        raise ConfigurationError(f"t_max must be positive, got {t_max}", keys=["t_max"])
    rng = rng if rng is not None else np.random.default_rng()
    thinner = _Thinner(model, ds, kind, thinning, rng, batch_size)

    x, v, t = float(init.x), int(init.v), float(init.t)
    t_end = t + t_max
    times: list[float] = []
    positions: list[float] = []
    velocities: list[int] = []
    reason: StopReason | None = None

    while reason is None:
        hit_time, hit_reason = float("inf"), None
        for rule in stop:
            s = rule.time_to_hit(x, v)
            if s == 0 and t == init.t:
                continue
            if s < hit_time:
                hit_time, hit_reason = s, rule.reason
        horizon = min(hit_time, t_end - t)
        switch = thinner.next_switch(x, v, horizon)

        if switch is None:
            step, reason = horizon, hit_reason if hit_time <= t_end - t else None
            if reason is None:
                reason = StopReason.CENSORED if stop else StopReason.HORIZON
        else:
            step = switch
        t_new = t + step
        x = x + v * (t_new - t)
        t = t_new
        if switch is not None:
            v = -v
            times.append(t)
            positions.append(x)
            velocities.append(v)
            if max_events is not None and len(times) >= max_events:
                reason = StopReason.SWITCH_LIMIT

    log = EventLog(
        initial_state=init,
        final_state=ZigZagState(x=x, v=v, t=t),
        stop_reason=reason,
        times=np.asarray(times, dtype=float),
        positions=np.asarray(positions, dtype=float),
        velocities=np.asarray(velocities, dtype=int),
        proposals=thinner.proposals,
        acceptances=len(times),
    )
    logger.debug(
        f"Trajectory {kind} stopped ({reason.value}) at t={t:.6g} after {log.acceptances} switches, "
        f"{log.proposals} proposals"
    )
    return log


def occupation_cdf(log: EventLog, grid) -> np.ndarray:
    """Time-averaged occupation measure of the trajectory evaluated as a CDF on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    t, x, _ = log.knots()
    dur = np.diff(t)
    lo = np.minimum(x[:-1], x[1:])
    total = float(dur.sum())
    if total <= 0:
        raise ConfigurationError("Trajectory has zero duration")
    out = np.zeros(grid.shape)
    step = max(1, (1 << 22) // max(grid.size, 1))
    for start in range(0, dur.size, step):
        sl = slice(start, start + step)
        out += np.clip(grid[:, None] - lo[None, sl], 0.0, dur[None, sl]).sum(axis=1)
    return out / total


def target_cdf(model: Model, ds: Dataset, grid, points: int = 20001) -> np.ndarray:
    """Posterior CDF on ``grid``; closed form (t_nu located at the datum) for one data point."""
    y = require_1d(model, ds)
    grid = np.asarray(grid, dtype=float)
    if ds.n == 1:
        return stats.t(df=model.nu, loc=float(y[0])).cdf(grid)
    pad = 50.0 * np.sqrt(model.nu)
    lo = min(float(grid.min()), float(y.min()) - pad)
    hi = max(float(grid.max()), float(y.max()) + pad)
    fine = np.linspace(lo, hi, points)
    logp = log_density_batch(model, ds, fine)
    dens = np.exp(logp - logp.max())
    cdf = integrate.cumulative_trapezoid(dens, fine, initial=0.0)
    return np.interp(grid, fine, cdf / cdf[-1])


def ks_distance(log: EventLog, model: Model, ds: Dataset, grid) -> float:
    """Sup distance on ``grid`` between the occupation CDF and the target CDF."""
    return float(np.max(np.abs(occupation_cdf(log, grid) - target_cdf(model, ds, grid))))

