"""
Experiments module.

Study drivers for exit-time scaling, the phase transition in nu,
micromode prevalence, width scaling, score-approximation decay,
extreme-value scaling and two-dimensional contour grids.
"""

from .contours import (
    ContourGrid,
    RegressionSpec,
    RidgeMaximum,
    contour_grid,
    grid_local_maxima,
    regression_log_posterior,
    ridge_maxima,
    simulate_regression,
    window_log_density,
)
from .fitting import box_stats, fit_loglog, ks_gamma, spearman
from .models import GridPoint, SlopeFit, StudyResult
from .runner import resolve_workers, run_tasks
from .studies import (
    STUDIES,
    contour_study,
    data_seed,
    evt_study,
    exit_scaling_study,
    grid_points,
    phase_transition_study,
    prevalence_cells,
    prevalence_study,
    run_study,
    score_approx_study,
    width_scaling_study,
)

__all__ = [
    "StudyResult",
    "SlopeFit",
    "GridPoint",
    "run_study",
    "STUDIES",
    "exit_scaling_study",
    "phase_transition_study",
    "prevalence_study",
    "prevalence_cells",
    "width_scaling_study",
    "score_approx_study",
    "evt_study",
    "contour_study",
    "grid_points",
    "data_seed",
    "run_tasks",
    "resolve_workers",
    "fit_loglog",
    "spearman",
    "box_stats",
    "ks_gamma",
    "ContourGrid",
    "RegressionSpec",
    "RidgeMaximum",
    "contour_grid",
    "grid_local_maxima",
    "simulate_regression",
    "regression_log_posterior",
    "ridge_maxima",
    "window_log_density",
]
