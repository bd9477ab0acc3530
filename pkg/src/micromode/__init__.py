"""
Micromode module.

Detects, certifies and measures posterior micromodes near extreme order
statistics and checks their quantitative bounds.
"""

from .bounds import (
    arrhenius_exponent,
    c_beta,
    critical_nu,
    default_m1,
    dn_bounds,
    dn_roots,
    event_flags,
    g_proxy,
    is_essential,
    theorem_bounds_check,
)
from .detection import certification_radius, certify, detect, locate, score_scale
from .models import BoundsReport, Certificate, DetectionResult, DetectionStatus, DnCertificate, EventFlags, Micromode
from .width import first_sign_change, width, with_measured_width

__all__ = [
    "Micromode",
    "Certificate",
    "DetectionResult",
    "DetectionStatus",
    "DnCertificate",
    "BoundsReport",
    "EventFlags",
    "locate",
    "detect",
    "certify",
    "certification_radius",
    "score_scale",
    "width",
    "with_measured_width",
    "first_sign_change",
    "c_beta",
    "dn_bounds",
    "dn_roots",
    "default_m1",
    "theorem_bounds_check",
    "event_flags",
    "g_proxy",
    "critical_nu",
    "is_essential",
    "arrhenius_exponent",
]
