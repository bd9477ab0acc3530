"""Data models for one-dimensional Zig-Zag trajectories."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd


class RateKind(str, Enum):
    """Switching-rate family."""

    CANONICAL = "canonical"
    SUBSAMPLING = "subsampling"


class ThinningBound(str, Enum):
    """Dominating intensity used by the thinning sampler.

    GLOBAL uses the constant n (nu + 1) / (2 sqrt(nu)); LOCAL recomputes a
    constant bound over short windows along the direction of motion.
    """

    GLOBAL = "global"
    LOCAL = "local"


class StopReason(str, Enum):
    HORIZON = "horizon"
    EXIT_LEFT = "exit_left"
    RETURNED_TO_START = "returned_to_start"
    CENSORED = "censored"
    SWITCH_LIMIT = "switch_limit"


@dataclass(frozen=True)
class ZigZagState:
    """Position, velocity and elapsed time."""

    x: float
    v: int
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.v not in (-1, 1):
            raise ValueError(f"Velocity must be -1 or +1, got {self.v}")


@dataclass(frozen=True)
class LevelCrossing:
    """Stop when the position crosses ``level`` while moving in ``direction``.

    direction=-1 fires on reaching the level from above, +1 from below.
    """

    level: float
    direction: int
    reason: StopReason

    def time_to_hit(self, x: float, v: int) -> float:
        """Time until the linear motion from (x, v) reaches the level, or +inf."""
        if v != self.direction:
            return float("inf")
        gap = v * (self.level - x)
        return gap if gap >= 0 else float("inf")


@dataclass
class EventLog:
    """A trajectory as its switching events.

    ``times``/``positions``/``velocities`` hold one entry per switch, with
    the velocity taken after the switch.
    """

    initial_state: ZigZagState
    final_state: ZigZagState
    stop_reason: StopReason
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    proposals: int = 0
    acceptances: int = 0

    @property
    def n_switches(self) -> int:
        return int(self.acceptances)

    @property
    def acceptance_rate(self) -> float:
        return self.acceptances / self.proposals if self.proposals else 0.0

    def knots(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(t, x, v) including the initial and final states; v is the velocity leaving each knot."""
        t = np.concatenate([[self.initial_state.t], self.times, [self.final_state.t]])
        x = np.concatenate([[self.initial_state.x], self.positions, [self.final_state.x]])
        v = np.concatenate([[self.initial_state.v], self.velocities, [self.final_state.v]])
        return t, x, v.astype(int)

    def reconstruct_final_position(self) -> float:
        """Replay unit-speed motion from the last knot before the final state."""
        t, x, v = self.knots()
        return float(x[-2] + v[-2] * (t[-1] - t[-2]))

    def to_frame(self) -> pd.DataFrame:
        t, x, v = self.knots()
        return pd.DataFrame({"t": t, "x": x, "v": v})


@dataclass(frozen=True)
class ExitResult:
    """Exit time from a micromode; ``tau`` is the censoring horizon when censored."""

    tau: float
    censored: bool
    n_switches: int
    first_excursion_exit: bool = False
    proposals: int = 0
    log: EventLog | None = field(default=None, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "tau": self.tau,
            "censored": self.censored,
            "n_switches": self.n_switches,
            "first_excursion_exit": self.first_excursion_exit,
            "proposals": self.proposals,
        }


@dataclass
class ExcursionStats:
    """Independent excursions from (x_plus, -1) and return times from (x_plus, +1)."""

    eta_samples: np.ndarray
    exited: np.ndarray
    t_return_samples: np.ndarray
    censored_excursions: int = 0
    censored_returns: int = 0
    extra: dict[str, float] = field(default_factory=dict)

    @property
    def n_excursions(self) -> int:
        return int(self.eta_samples.size)

    @property
    def p_tau_hat(self) -> float:
        return float(self.exited.mean()) if self.exited.size else float("nan")

    @property
    def p_tau_stderr(self) -> float:
        p = self.p_tau_hat
        return float(np.sqrt(p * (1.0 - p) / max(self.n_excursions, 1)))

    @property
    def mean_eta(self) -> float:
        return float(self.eta_samples.mean()) if self.eta_samples.size else float("nan")

    @property
    def mean_return(self) -> float:
        return float(self.t_return_samples.mean()) if self.t_return_samples.size else 0.0
