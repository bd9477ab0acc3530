"""
Score, information matrix and log density of the Student-t location posterior.

    log pi(x) = -(nu + d)/2 * sum_j log(nu + |x - Y_j|^2)
    S(x, y)   = (x - y) / (nu + |x - y|^2)
    S_n(x)    = sum_j S(x, Y_j) = -grad log pi(x) / (nu + d)

Batch variants evaluate many positions at once, chunked over the data.
"""

import numpy as np

from src.heavytail.models import Dataset
from src.utils.errors import ShapeError
from .models import Model, ScoreReport

# Max number of (position, point) pairs materialised at once
_PAIR_BUDGET = 1 << 22


def _check(model: Model, ds: Dataset) -> None:
    if model.d != ds.d:
        raise ShapeError(f"Model dimension {model.d} does not match dataset dimension {ds.d}")


def as_position(model: Model, x) -> np.ndarray:
    """Coerce a scalar or sequence into a d-vector."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (model.d,):
        raise ShapeError(f"Expected a position of shape ({model.d},), got {arr.shape}")
    return arr


def as_positions(model: Model, xs) -> np.ndarray:
    """Coerce positions into shape (m, d); a 1D array is read as m scalar positions when d=1."""
    arr = np.asarray(xs, dtype=float)
    if arr.ndim == 1 and model.d == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != model.d:
        raise ShapeError(f"Expected positions of shape (m, {model.d}), got {arr.shape}")
    return arr


def score_term(model: Model, x, y) -> np.ndarray:
    """S(x, y) = (x - y) / (nu + |x - y|^2); its norm never exceeds 1/(2 sqrt(nu))."""
    xv = as_position(model, x)
    yv = as_position(model, y)
    diff = xv - yv
    return diff / (model.nu + diff @ diff)


def score(model: Model, ds: Dataset, x) -> np.ndarray:
    """Empirical score S_n(x) = sum_j S(x, Y_j)."""
    _check(model, ds)
    diff = as_position(model, x) - ds.points
    q = model.nu + np.einsum("ij,ij->i", diff, diff)
    return (diff / q[:, None]).sum(axis=0)


def info_matrix(model: Model, ds: Dataset, x) -> np.ndarray:
    """Jacobian S'_n(x) = sum_j I/q_j - 2 (x - Y_j)(x - Y_j)^T / q_j^2, exactly symmetric."""
    _check(model, ds)
    diff = as_position(model, x) - ds.points
    q = model.nu + np.einsum("ij,ij->i", diff, diff)
    mat = np.eye(model.d) * np.sum(1.0 / q) - 2.0 * np.einsum("ni,nj,n->ij", diff, diff, 1.0 / (q * q))
    return 0.5 * (mat + mat.T)


def log_density_unnorm(model: Model, ds: Dataset, x) -> float:
    """-(nu + d)/2 * sum_j log(nu + |x - Y_j|^2); no normalising constant."""
    _check(model, ds)
    diff = as_position(model, x) - ds.points
    q = model.nu + np.einsum("ij,ij->i", diff, diff)
    return float(-model.exponent * np.sum(np.log(q)))


def evaluate(model: Model, ds: Dataset, x) -> ScoreReport:
    """Score, information matrix and log density at one position."""
    return ScoreReport(
        value=score(model, ds, x),
        info=info_matrix(model, ds, x),
        log_density=log_density_unnorm(model, ds, x),
    )


def _chunks(m: int, n: int):
    step = max(1, _PAIR_BUDGET // max(m, 1))
    for start in range(0, n, step):
        yield slice(start, min(n, start + step))


def score_batch(model: Model, ds: Dataset, xs) -> np.ndarray:
    """S_n at each row of ``xs``; returns shape (m, d)."""
    _check(model, ds)
    pos = as_positions(model, xs)
    out = np.zeros_like(pos)
    for sl in _chunks(pos.shape[0], ds.n):
        diff = pos[:, None, :] - ds.points[None, sl, :]
        q = model.nu + np.einsum("mnd,mnd->mn", diff, diff)
        out += np.einsum("mnd,mn->md", diff, 1.0 / q)
    return out


def info_batch(model: Model, ds: Dataset, xs) -> np.ndarray:
    """S'_n at each row of ``xs``; returns shape (m, d, d)."""
    _check(model, ds)
    pos = as_positions(model, xs)
    m, d = pos.shape
    out = np.zeros((m, d, d))
    eye = np.eye(d)
    for sl in _chunks(m, ds.n):
        diff = pos[:, None, :] - ds.points[None, sl, :]
        q = model.nu + np.einsum("mnd,mnd->mn", diff, diff)
        out += eye[None, :, :] * np.sum(1.0 / q, axis=1)[:, None, None]
        out -= 2.0 * np.einsum("mni,mnj,mn->mij", diff, diff, 1.0 / (q * q))
    return 0.5 * (out + np.swapaxes(out, 1, 2))


def _pair_q(nu: float, pos: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """nu + |x_i - y_j|^2 for every (position, point) pair, one coordinate at a time."""
    q = np.full((pos.shape[0], pts.shape[0]), nu)
    for k in range(pos.shape[1]):
        diff = np.subtract.outer(pos[:, k], pts[:, k])
        np.square(diff, out=diff)
        q += diff
    return q


def log_density_batch(model: Model, ds: Dataset, xs) -> np.ndarray:
    """Unnormalised log density at each row of ``xs``; returns shape (m,)."""
    _check(model, ds)
    pos = as_positions(model, xs)
    out = np.zeros(pos.shape[0])
    for sl in _chunks(pos.shape[0], ds.n):
        q = _pair_q(model.nu, pos, ds.points[sl])
        np.log(q, out=q)
        out += q.sum(axis=1)
    return -model.exponent * out
