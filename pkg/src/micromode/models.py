"""Data models for micromode detection, certification and bounds."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

import numpy as np


class DetectionStatus(str, Enum):
    """Outcome of a micromode search around an order statistic."""

    FOUND = "found"
    ABSENT = "absent"
    NOT_CONVERGED = "not_converged"
    CERTIFICATION_FAILED = "certification_failed"


@dataclass(frozen=True)
class Certificate:
    """Sampled evidence for the uniqueness conditions around the anchor.

    ``min_eigenvalue_on_ball`` is the smallest eigenvalue of S'_n over points
    of the ball of radius ``pd_radius``; ``boundary_min_outward_gradient``
    is the smallest v^T S_n(anchor + r v) over directions v and radii r in
    [pd_radius, outer_radius].
    """

    boundary_min_outward_gradient: float
    min_eigenvalue_on_ball: float
    pd_radius: float
    outer_radius: float
    directions: int

    @property
    def passed(self) -> bool:
        return self.boundary_min_outward_gradient > 0 and self.min_eigenvalue_on_ball > 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "boundary_min_outward_gradient": self.boundary_min_outward_gradient,
            "min_eigenvalue_on_ball": self.min_eigenvalue_on_ball,
            "pd_radius": self.pd_radius,
            "outer_radius": self.outer_radius,
            "directions": self.directions,
        }


@dataclass(frozen=True, eq=False)
class Micromode:
    """A local maximum of the posterior anchored at Y_(n-k).

    ``width`` is +inf when the score has no other root in the searched
    directions, nan until measured. ``x_minus`` is only defined in 1D.
    """

    k: int
    anchor: np.ndarray
    x_plus: np.ndarray
    certified: bool
    certificate: Certificate | None = None
    width: float = float("nan")
    x_minus: float | None = None
    residual: float = 0.0
    iterations: int = 0
    width_directions: int | None = None

    def with_width(self, width: float, x_minus: float | None, directions: int | None = None) -> "Micromode":
        return replace(self, width=float(width), x_minus=x_minus, width_directions=directions)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "anchor": self.anchor.tolist(),
            "x_plus": self.x_plus.tolist(),
            "width": self.width,
            "x_minus": self.x_minus,
            "certified": self.certified,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "residual": self.residual,
            "iterations": self.iterations,
            "width_directions": self.width_directions,
        }


@dataclass(frozen=True)
class DetectionResult:
    """Full outcome of :func:`locate`.

    ``certification_radius`` is the reference radius r (d_n^- when real, else
    sqrt(nu)/2); ``pd_radius`` is the inner radius the certificate actually used.
    """

    status: DetectionStatus
    micromode: Micromode | None = None
    iterations: int = 0
    message: str = ""
    certification_radius: float = float("nan")

    @property
    def found(self) -> bool:
        return self.status == DetectionStatus.FOUND

    @property
    def pd_radius(self) -> float:
        if self.micromode is None or self.micromode.certificate is None:
            return float("nan")
        return self.micromode.certificate.pd_radius

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "found": self.found,
            "iterations": self.iterations,
            "message": self.message,
            "certification_radius": self.certification_radius,
            "pd_radius": self.pd_radius,
        }


@dataclass(frozen=True)
class DnCertificate:
    """d_n = n^(1-1/beta)/m1 and the roots d_n^+ <= d_n^- of d_n t^2 - t + d_n nu."""

    d_n: float
    d_n_plus: float
    d_n_minus: float
    m1: float
    real: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "d_n": self.d_n,
            "d_n_plus": self.d_n_plus,
            "d_n_minus": self.d_n_minus,
            "m1": self.m1,
            "real": self.real,
        }


@dataclass
class BoundsReport:
    """Location and width inequalities evaluated with a plug-in for G_k.

    The booleans are None when ``event_a_violated`` (the proxy does not
    exceed c_beta, so the inequalities are not in force).
    """

    g: float
    c_beta: float
    event_a_violated: bool = False
    location_ok: bool | None = None
    width_lo_ok: bool | None = None
    width_hi_ok: bool | None = None
    margins: dict[str, float] = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return bool(self.location_ok and self.width_lo_ok and self.width_hi_ok)

    def to_dict(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "c_beta": self.c_beta,
            "event_a_violated": self.event_a_violated,
            "location_ok": self.location_ok,
            "width_lo_ok": self.width_lo_ok,
            "width_hi_ok": self.width_hi_ok,
            "margins": dict(self.margins),
        }


@dataclass(frozen=True)
class EventFlags:
    """Conditioning events around Y_(n-k)."""

    a_n: bool
    a_prime_n: bool
    b_n: bool
    a: bool

    @property
    def e_n(self) -> bool:
        return self.a_prime_n and self.b_n and self.a

    def to_dict(self) -> dict[str, bool]:
        return {"A_n": self.a_n, "A_prime_n": self.a_prime_n, "B_n": self.b_n, "A": self.a, "E_n": self.e_n}
