"""
Heavy-tail module.

Generates isotropic multivariate-t datasets and exposes order statistics
and extreme-value diagnostics.
"""

from .evt import (
    evt_constant_A,
    frechet_limit_cdf,
    gk_proxy,
    radial_cdf,
    radial_density,
    radial_scale,
    sphere_area,
    tail_constant_K,
)
from .models import DataConfig, Dataset
from .sampling import isolation_gap, order_radius, order_statistic, right_tail, sample_dataset

__all__ = [
    "DataConfig",
    "Dataset",
    "sample_dataset",
    "order_statistic",
    "order_radius",
    "isolation_gap",
    "right_tail",
    "evt_constant_A",
    "tail_constant_K",
    "sphere_area",
    "radial_density",
    "radial_cdf",
    "frechet_limit_cdf",
    "gk_proxy",
    "radial_scale",
]
