"""
Micromode detection and certification.

A candidate is a root of S_n inside the sqrt(nu)-ball around Y_(n-k) with a
positive-definite Jacobian. Uniqueness is certified on sampled points: S'_n
must stay positive definite on an inner ball and the outward component of
S_n must stay positive on the surrounding annulus up to radius sqrt(nu).
"""

import numpy as np
from scipy import linalg

from src.heavytail.models import Dataset
from src.heavytail.sampling import order_statistic
from src.posterior.approximation import sphere_directions
from src.posterior.models import Model
from src.posterior.score import info_batch, info_matrix, score, score_batch
from src.utils.errors import ShapeError
from src.utils.logging import get_logger
from .models import Certificate, DetectionResult, DetectionStatus, DnCertificate, Micromode
from .width import DEFAULT_WIDTH_DIRECTIONS, with_measured_width

logger = get_logger(__name__)

ROOT_TOL = 1e-10
MAX_ITER = 100
SCAN_INTERVALS = 64
BALL_RADII = 32
DEFAULT_DIRECTIONS = 256


def score_scale(model: Model, ds: Dataset) -> float:
    """n / (2 sqrt(nu)), the global bound on |S_n|."""
    return ds.n / (2.0 * model.sqrt_nu)


def certification_radius(model: Model, dn: DnCertificate | None = None) -> float:
    """Reference radius r of the uniqueness argument: d_n^- when real, else sqrt(nu)/2."""
    if dn is not None and dn.real:
        return dn.d_n_minus
    return 0.5 * model.sqrt_nu


def _root_1d(model: Model, ds: Dataset, anchor: float, tol: float, max_iter: int):
    """Bracketed Newton on S_n over the ball [anchor - sqrt(nu), anchor + sqrt(nu)]."""
    rad = model.sqrt_nu
    grid = anchor - rad + 2.0 * rad * np.arange(SCAN_INTERVALS + 1) / SCAN_INTERVALS
    vals = score_batch(model, ds, grid)[:, 0]
    candidates = np.flatnonzero((vals[:-1] < 0) & (vals[1:] >= 0))
    if candidates.size == 0:
        return DetectionStatus.ABSENT, None, 0, "score has no upward sign change in the ball"

    mids = 0.5 * (grid[candidates] + grid[candidates + 1])
    i = int(candidates[np.argmin(np.abs(mids - anchor))])
    lo, hi = float(grid[i]), float(grid[i + 1])
    if vals[i + 1] == 0:
        return DetectionStatus.FOUND, hi, 0, ""

    x = anchor if lo < anchor < hi else 0.5 * (lo + hi)
    for it in range(1, max_iter + 1):
        s = float(score(model, ds, [x])[0])
        if abs(s) < tol:
            return DetectionStatus.FOUND, x, it, ""
        if s < 0:
            lo = x
        else:
            hi = x
        slope = float(info_matrix(model, ds, [x])[0, 0])
        nxt = x - s / slope if slope > 0 else np.nan
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if nxt == x or hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
            logger.debug(f"Bracket collapsed at x={x:.17g} with residual {s:.3g}")
            return DetectionStatus.FOUND, x, it, "bracket collapsed to float resolution"
        x = nxt
    return DetectionStatus.NOT_CONVERGED, None, max_iter, f"no convergence after {max_iter} iterations"


def _root_nd(model: Model, ds: Dataset, anchor: np.ndarray, tol: float, max_iter: int):
    """Damped Newton from the anchor, kept inside the sqrt(nu)-ball."""
    rad = model.sqrt_nu
    x = anchor.copy()
    for it in range(1, max_iter + 1):
        s = score(model, ds, x)
        s_norm = float(np.linalg.norm(s))
        if s_norm < tol:
            return DetectionStatus.FOUND, x, it, ""
        try:
            step = -linalg.cho_solve(linalg.cho_factor(info_matrix(model, ds, x)), s)
        except linalg.LinAlgError:
            step = -model.nu * s
            length = np.linalg.norm(step)
            if length > rad / 4:
                step *= rad / (4 * length)

        alpha = 1.0
        for _ in range(40):
            cand = x + alpha * step
            if np.linalg.norm(cand - anchor) <= rad and np.linalg.norm(score(model, ds, cand)) < s_norm:
                break
            alpha *= 0.5
        else:
            if np.linalg.norm(x + step - anchor) > rad:
                return DetectionStatus.ABSENT, None, it, "Newton iterate leaves the sqrt(nu)-ball"
            return DetectionStatus.NOT_CONVERGED, None, it, "damped step makes no progress"
        x = cand
    return DetectionStatus.NOT_CONVERGED, None, max_iter, f"no convergence after {max_iter} iterations"


def certify(
    model: Model,
    ds: Dataset,
    anchor: np.ndarray,
    x_plus: np.ndarray,
    directions: int = DEFAULT_DIRECTIONS,
) -> Certificate:
    """Sampled uniqueness certificate for a root near ``anchor``.

    The inner radius is sqrt(nu)/2, widened to twice the root offset (at most
    0.95 sqrt(nu)) so the ball always contains x_plus.
    """
    rad = model.sqrt_nu
    offset = float(np.linalg.norm(x_plus - anchor))
    pd_radius = min(0.95 * rad, max(0.5 * rad, 2.0 * offset))
    dirs = sphere_directions(ds.d, directions)

    inner = pd_radius * np.arange(BALL_RADII + 1) / BALL_RADII
    ball = (anchor[None, None, :] + inner[:, None, None] * dirs[None, :, :]).reshape(-1, ds.d)
    ball = np.vstack([ball, x_plus[None, :]])
    min_eig = float(np.linalg.eigvalsh(info_batch(model, ds, ball)).min())

    shell = pd_radius + (rad - pd_radius) * np.arange(BALL_RADII + 1) / BALL_RADII
    pts = anchor[None, None, :] + shell[:, None, None] * dirs[None, :, :]
    grads = score_batch(model, ds, pts.reshape(-1, ds.d)).reshape(pts.shape)
    outward = float(np.einsum("rmd,md->rm", grads, dirs).min())

    return Certificate(
        boundary_min_outward_gradient=outward,
        min_eigenvalue_on_ball=min_eig,
        pd_radius=pd_radius,
        outer_radius=rad,
        directions=len(dirs),
    )


def locate(
    model: Model,
    ds: Dataset,
    k: int,
    *,
    directions: int = DEFAULT_DIRECTIONS,
    width_directions: int = DEFAULT_WIDTH_DIRECTIONS,
    max_iter: int = MAX_ITER,
    measure_width: bool = True,
    dn: DnCertificate | None = None,
) -> DetectionResult:
    """Search for the micromode anchored at Y_(n-k).

    Args:
        model: Likelihood parameters
        ds: Dataset
        k: Order index from the top
        directions: Sphere directions used by the certificate (d >= 2)
        width_directions: Sphere directions used by the width (d >= 2)
        max_iter: Newton iteration cap
        measure_width: Fill in width and x_minus for certified micromodes
        dn: d_n certificate that sets the recorded reference radius

    Returns:
        DetectionResult; ``micromode`` is set for FOUND and CERTIFICATION_FAILED

    Raises:
        OrderIndexError: If k >= n
    """
    if model.d != ds.d:
        raise ShapeError(f"Model dimension {model.d} does not match dataset dimension {ds.d}")
    anchor = order_statistic(ds, k)
    tol = ROOT_TOL * score_scale(model, ds)
    radius = certification_radius(model, dn)

    if ds.d == 1:
        status, root, iters, message = _root_1d(model, ds, float(anchor[0]), tol, max_iter)
        x_plus = None if root is None else np.array([root])
    else:
        status, x_plus, iters, message = _root_nd(model, ds, anchor, tol, max_iter)

    if status != DetectionStatus.FOUND or x_plus is None:
        logger.debug(f"No micromode at k={k}: {status.value} ({message})")
        return DetectionResult(status=status, iterations=iters, message=message, certification_radius=radius)

    if np.linalg.eigvalsh(info_matrix(model, ds, x_plus)).min() <= 0:
        return DetectionResult(
            DetectionStatus.ABSENT, iterations=iters, message="root is not a local maximum", certification_radius=radius
        )

    cert = certify(model, ds, anchor, x_plus, directions)
    residual = float(np.linalg.norm(score(model, ds, x_plus)))
    mm = Micromode(
        k=k,
        anchor=anchor,
        x_plus=x_plus,
        certified=cert.passed,
        certificate=cert,
        residual=residual,
        iterations=iters,
    )
    if not cert.passed:
        logger.debug(f"Certification failed at k={k}: {cert.to_dict()}")
        return DetectionResult(
            DetectionStatus.CERTIFICATION_FAILED,
            mm,
            iters,
            "uniqueness certificate failed",
            certification_radius=radius,
        )

    if measure_width:
        mm = with_measured_width(model, ds, mm, width_directions)
    return DetectionResult(DetectionStatus.FOUND, mm, iters, message, certification_radius=radius)


def detect(model: Model, ds: Dataset, k: int, **kwargs) -> Micromode | None:
    """Micromode anchored at Y_(n-k), or None when no local maximum is found."""
    return locate(model, ds, k, **kwargs).micromode
