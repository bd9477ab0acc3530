"""
Posterior module.

Student-t location posterior: log density, score, information matrix,
the approximate score near an extreme observation and its diagnostics.
"""

from .approximation import (
    approx_score,
    ball_grid,
    default_resolution,
    score_deviation_sup,
    score_roughness,
    sphere_directions,
)
from .models import Model, ScoreReport
from .score import (
    as_position,
    as_positions,
    evaluate,
    info_batch,
    info_matrix,
    log_density_batch,
    log_density_unnorm,
    score,
    score_batch,
    score_term,
)

__all__ = [
    "Model",
    "ScoreReport",
    "score_term",
    "score",
    "info_matrix",
    "log_density_unnorm",
    "evaluate",
    "score_batch",
    "info_batch",
    "log_density_batch",
    "as_position",
    "as_positions",
    "approx_score",
    "score_deviation_sup",
    "score_roughness",
    "sphere_directions",
    "ball_grid",
    "default_resolution",
]
