"""
Study drivers.

Every study expands its configuration into a grid of (configuration,
replicate) tasks, runs them on the worker pool and reduces the results in
task order. A task either returns a row or a conditioning rejection; both
are kept, so reported rates always come with their denominators.
"""

import itertools
from collections.abc import Callable
from typing import Any

import numpy as np
import pandas as pd
from scipy import stats

from src.config.models import StudyConfig, StudyKind
from src.heavytail.evt import evt_constant_A, gk_proxy, radial_scale
from src.heavytail.models import DataConfig, Dataset
from src.heavytail.sampling import order_radius, order_statistic, right_tail, sample_dataset
from src.micromode.bounds import (
    PROXIES,
    arrhenius_exponent,
    critical_nu,
    event_flags,
    g_proxy,
    is_essential,
    theorem_bounds_check,
)
from src.micromode.detection import locate
from src.micromode.models import DetectionStatus, Micromode
from src.posterior.approximation import score_deviation_sup, score_roughness
from src.posterior.models import Model
from src.utils.logging import get_logger
from src.utils.rng import derive_seed, make_rng
from src.zigzag.exit import excursion_stats, exit_levels, exit_time
from src.zigzag.models import RateKind
from src.zigzag.renewal import p_tau_exact, renewal_bootstrap, renewal_exit_estimate
from .contours import contour_grid, grid_local_maxima, ridge_maxima, simulate_regression
from .fitting import box_stats, fit_loglog, ks_gamma, spearman
from .models import GridPoint, StudyResult
from .runner import run_tasks

logger = get_logger(__name__)

GRID_AXES: dict[StudyKind, tuple[str, ...]] = {
    StudyKind.EXIT_SCALING: ("beta", "nu", "n"),
    StudyKind.PHASE_TRANSITION: ("beta", "n", "nu"),
    StudyKind.PREVALENCE: ("beta", "d", "nu", "n", "k"),
    StudyKind.WIDTH_SCALING: ("beta", "d", "nu", "n", "k"),
    StudyKind.SCORE_APPROX: ("beta", "d", "nu", "n", "k"),
    StudyKind.EVT: ("beta", "d", "k", "n"),
    StudyKind.CONTOUR: ("beta", "nu", "n"),
}

# spawn-key suffix of the renewal bootstrap stream
_BOOTSTRAP_STREAM = 1
_SOLVER_FAILURES = (DetectionStatus.NOT_CONVERGED.value, DetectionStatus.CERTIFICATION_FAILED.value)
# accepted half-widths around the target slope
EXIT_SLOPE_TOL = 0.5
WIDTH_SLOPE_TOL = 0.25


# ---- Grid and task plumbing ----


def grid_points(cfg: StudyConfig) -> list[GridPoint]:
    """Cartesian product of the grid axes used by ``cfg.kind``, last axis fastest."""
    axes = GRID_AXES[cfg.kind]
    points = []
    for g, combo in enumerate(itertools.product(*(enumerate(getattr(cfg, a)) for a in axes))):
        values = {a: val for a, (_, val) in zip(axes, combo, strict=True)}
        positions = {a: pos for a, (pos, _) in zip(axes, combo, strict=True)}
        values.setdefault("d", cfg.d[0])
        values.setdefault("k", cfg.k[0])
        points.append(GridPoint(index=g, values=values, positions=positions))
    return points


def data_seed(cfg: StudyConfig, point: GridPoint, replicate: int) -> int:
    """Seed of the dataset behind a task; depends on the data axes (beta, d, n) only."""
    pos = point.positions
    return derive_seed(cfg.seed, pos.get("beta", 0), pos.get("d", 0), pos.get("n", 0), replicate)


def _dataset(cfg: StudyConfig, point: GridPoint, replicate: int) -> tuple[Dataset, int]:
    seed = data_seed(cfg, point, replicate)
    v = point.values
    return sample_dataset(DataConfig(beta=v["beta"], d=v["d"], n=v["n"], seed=seed)), seed


def _base(point: GridPoint, replicate: int, seed: int) -> dict[str, Any]:
    return {"grid_index": point.index, "replicate": replicate, **point.values, "data_seed": seed}


def _reject(base: dict[str, Any], reason: str) -> dict[str, Any]:
    return {"rejection": {**base, "reason": reason}}


def _collect(cfg: StudyConfig, results: list[dict[str, Any]]) -> tuple[pd.DataFrame, pd.DataFrame]:
    rows = [res["row"] for res in results if "row" in res]
    rejections = [res["rejection"] for res in results if "rejection" in res]
    for rej in rejections:
        logger.warning(
            f"{cfg.name}: rejected grid point {rej['grid_index']} replicate {rej['replicate']} "
            f"(beta={rej['beta']}, n={rej['n']}): {rej['reason']}"
        )
    return pd.DataFrame(rows), pd.DataFrame(rejections)


def _tasks(cfg: StudyConfig) -> list[tuple[GridPoint, int]]:
    return [(point, r) for point in grid_points(cfg) for r in range(cfg.replicates)]


def _counts(rejections: pd.DataFrame, total: int) -> dict[str, Any]:
    n_rej = len(rejections)
    return {
        "tasks": total,
        "accepted": total - n_rej,
        "rejected": n_rej,
        "rejection_rate": n_rej / total if total else float("nan"),
        "rejection_reasons": rejections["reason"].value_counts().to_dict() if n_rej else {},
    }


def _rate(mask: pd.Series) -> float:
    return float(mask.mean()) if len(mask) else float("nan")


def _by_n(grp: pd.DataFrame, col: str, how: str) -> dict[int, float]:
    return {int(n): float(val) for n, val in grp.groupby("n")[col].agg(how).items()}


def _fit_dict(fit) -> dict[str, Any] | None:
    return fit.to_dict() if fit is not None else None


def _consistent(fit, tol: float) -> bool | None:
    if fit is None or fit.target is None:
        return None
    return fit.consistent_with(fit.target - tol, fit.target + tol)


# ---- Exit times ----


def _exit_estimate(
    cfg: StudyConfig, model: Model, ds: Dataset, mm: Micromode, rate: RateKind, stream: tuple[int, ...]
) -> tuple[dict[str, float], list[float]]:
    """Mean exit time and its diagnostics for one rate kind.

    The second item is one exit-time sample per trajectory: the simulated taus
    for the direct estimator, bootstrap renewal means for the renewal one.
    """
    if cfg.estimator == "renewal":
        st = excursion_stats(
            model, ds, rate, mm, make_rng(cfg.seed, *stream), cfg.trajectories, cfg.t_max, thinning=cfg.thinning
        )
        ds_r, x_minus, x_plus = exit_levels(model, ds, mm)
        p_tau = p_tau_exact(model, ds_r, rate, x_minus, x_plus)
        mean_tau = renewal_exit_estimate(p_tau, st.mean_eta, st.mean_return)
        runs = st.n_excursions + st.t_return_samples.size
        censored = (st.censored_excursions + st.censored_returns) / max(runs, 1)
        est = {
            "mean_tau": mean_tau,
            "censored_rate": censored,
            "p_exit": st.p_tau_hat,
            "p_tau": p_tau,
            "mean_eta": st.mean_eta,
            "mean_return": st.mean_return,
        }
        boot_rng = make_rng(cfg.seed, *stream, _BOOTSTRAP_STREAM)
        boot = renewal_bootstrap(p_tau, st.eta_samples, st.t_return_samples, boot_rng, cfg.trajectories)
        return est, boot.tolist()

    taus, censored, first = [], 0, 0
    for t in range(cfg.trajectories):
        res = exit_time(model, ds, rate, mm, make_rng(cfg.seed, *stream, t), cfg.t_max, thinning=cfg.thinning)
        taus.append(res.tau)
        censored += int(res.censored)
        first += int(res.first_excursion_exit)
    n = len(taus)
    est = {
        "mean_tau": float(np.mean(taus)),
        "censored_rate": censored / n,
        "p_exit": first / n,
        "p_tau": float("nan"),
        "mean_eta": float("nan"),
        "mean_return": float("nan"),
    }
    return est, taus


def _exit_task(cfg: StudyConfig, point: GridPoint, replicate: int) -> dict[str, Any]:
    ds, seed = _dataset(cfg, point, replicate)
    ds = right_tail(ds)
    base = _base(point, replicate, seed)
    model = Model(nu=point.values["nu"], d=1)

    found = locate(model, ds, 0)
    if not found.found:
        return _reject(base, f"detection {found.status.value}")
    mm = found.micromode
    if not np.isfinite(mm.width):
        return _reject(base, "unbounded width")
    flags = event_flags(
        model, ds, 0, cfg.eps, cfg.delta, proxy=cfg.bounds_proxy, grid_resolution=cfg.grid_resolution
    )
    if not flags.e_n:
        return _reject(base, f"E_n false {flags.to_dict()}")

    y_n = float(order_radius(ds, 0))
    row = {
        **base,
        "y_n": y_n,
        "x_plus": float(mm.x_plus[0]),
        "width": mm.width,
        "a_n": flags.a_n,
        "target_exponent": arrhenius_exponent(point.values["beta"], model.nu),
    }
    samples = {}
    for ki, rate in enumerate(cfg.rate_kinds):
        est, taus = _exit_estimate(cfg, model, ds, mm, rate, (point.index, replicate, ki))
        row.update({f"{rate.value}_{key}": val for key, val in est.items()})
        row[f"{rate.value}_mean_tau_over_yn"] = est["mean_tau"] / y_n
        samples[rate.value] = [tau / y_n for tau in taus]
    return {"row": row, "samples": samples}


def exit_scaling_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """Fit log mean exit time against log n for each rate kind.

    Fits are reported over all accepted replicates and again without the
    replicates that saw any censored trajectory. A sample size at which
    every replicate was rejected leaves a partial result and a warning.
    """
    tasks = _tasks(cfg)
    results = run_tasks(_exit_task, cfg, tasks, threads, progress)
    rows, rejections = _collect(cfg, results)
    summary: dict[str, Any] = {**_counts(rejections, len(tasks)), "estimator": cfg.estimator, "fits": []}

    accepted_n = set(rows["n"]) if len(rows) else set()
    partial = sorted(n for n in cfg.n if n not in accepted_n)
    if partial:
        logger.warning(f"{cfg.name}: every replicate was rejected at n={partial}; fits are partial")
    summary["partial_n"] = partial

    if len(rows):
        for (beta, nu), grp in rows.groupby(["beta", "nu"], sort=True):
            slopes = {}
            for rate in cfg.rate_kinds:
                col = f"{rate.value}_mean_tau"
                clean = grp[grp[f"{rate.value}_censored_rate"] == 0]
                target = arrhenius_exponent(beta, nu)
                fit = fit_loglog(grp["n"], grp[col], target)
                summary["fits"].append(
                    {
                        "beta": beta,
                        "nu": nu,
                        "rate_kind": rate.value,
                        "fit": _fit_dict(fit),
                        "slope_consistent": _consistent(fit, EXIT_SLOPE_TOL),
                        "fit_uncensored": _fit_dict(fit_loglog(clean["n"], clean[col], target)),
                        "censored_rate": float(grp[f"{rate.value}_censored_rate"].mean()),
                        "mean_tau_by_n": _by_n(grp, col, "mean"),
                    }
                )
                if fit is not None:
                    slopes[rate.value] = fit.slope
            if len(slopes) == 2:
                summary.setdefault("slope_gaps", []).append(
                    {"beta": beta, "nu": nu, "gap": abs(slopes["canonical"] - slopes["subsampling"])}
                )
    return StudyResult(config=cfg, rows=rows, summary=summary, rejections=rejections)


def phase_transition_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """Sweep nu at fixed n and record the mean exit time relative to |Y_(n)|.

    Replicates share their dataset across the nu grid. Box statistics pool
    the per-trajectory values tau/|Y_(n)|; under the renewal estimator these
    are bootstrap renewal means, one per trajectory.
    """
    tasks = _tasks(cfg)
    results = run_tasks(_exit_task, cfg, tasks, threads, progress)
    rows, rejections = _collect(cfg, results)

    if len(rows):
        rows["critical_nu"] = [critical_nu(b) for b in rows["beta"]]
        rows["critical"] = np.isclose(rows["nu"], rows["critical_nu"])
        rows["essential"] = [is_essential(b, nu) for b, nu in zip(rows["beta"], rows["nu"], strict=True)]

    pooled: dict[tuple[int, str], list[float]] = {}
    for (point, _), res in zip(tasks, results, strict=True):
        for rate, vals in res.get("samples", {}).items():
            pooled.setdefault((point.index, rate), []).extend(vals)

    summary: dict[str, Any] = {**_counts(rejections, len(tasks)), "estimator": cfg.estimator, "sweeps": []}
    points = grid_points(cfg)
    for beta, n in itertools.product(cfg.beta, cfg.n):
        sweep_points = [p for p in points if p.values["beta"] == beta and p.values["n"] == n]
        for rate in cfg.rate_kinds:
            table = []
            for p in sweep_points:
                sub = rows[rows["grid_index"] == p.index] if len(rows) else rows
                nu = p.values["nu"]
                col = f"{rate.value}_mean_tau_over_yn"
                table.append(
                    {
                        "nu": nu,
                        "critical": bool(np.isclose(nu, critical_nu(beta))),
                        "essential": is_essential(beta, nu),
                        "replicates": len(sub),
                        "mean_tau_over_yn": float(sub[col].mean()) if len(sub) else float("nan"),
                        "censored_rate": float(sub[f"{rate.value}_censored_rate"].mean()) if len(sub) else float("nan"),
                        "box": box_stats(pooled.get((p.index, rate.value), [])),
                    }
                )
            means = [t["mean_tau_over_yn"] for t in table]
            nus = [t["nu"] for t in table]
            lo, hi = int(np.argmin(nus)), int(np.argmax(nus))
            summary["sweeps"].append(
                {
                    "beta": beta,
                    "n": n,
                    "rate_kind": rate.value,
                    "critical_nu": critical_nu(beta),
                    "by_nu": table,
                    "ratio_max_to_min_nu": means[hi] / means[lo] if means[lo] > 0 else float("nan"),
                    "spearman": spearman(nus, means),
                }
            )
    return StudyResult(config=cfg, rows=rows, summary=summary, rejections=rejections)


# ---- Micromode prevalence, width and score approximation ----


def _bounds_columns(cfg: StudyConfig, model: Model, ds: Dataset, mm: Micromode, k: int, beta: float) -> dict:
    """Bound checks under the configured proxy, plus suffixed columns for every proxy."""
    cols: dict[str, Any] = {}
    for proxy in PROXIES:
        g = g_proxy(ds, k, beta, proxy)
        report = theorem_bounds_check(model, ds, mm, g, beta)
        checked = {
            "g": g,
            "event_a_violated": report.event_a_violated,
            "bounds_ok": report.all_ok if not report.event_a_violated else None,
        }
        cols.update({f"{key}_{proxy}": val for key, val in checked.items()})
        if proxy == cfg.bounds_proxy:
            cols.update(checked)
            cols.update({f"margin_{key}": val for key, val in report.margins.items()})
    return cols


def _prevalence_task(cfg: StudyConfig, point: GridPoint, replicate: int) -> dict[str, Any]:
    ds, seed = _dataset(cfg, point, replicate)
    v = point.values
    model = Model(nu=v["nu"], d=v["d"])
    k = v["k"]
    res = locate(model, ds, k)
    row = {
        **_base(point, replicate, seed),
        "radius": order_radius(ds, k),
        "a_n": bool(order_radius(ds, k) > 2.0 * v["n"] * model.sqrt_nu),
        "status": res.status.value,
        "found": res.found,
        "width": res.micromode.width if res.found else float("nan"),
    }
    if res.found and v["beta"] <= 1 and np.isfinite(res.micromode.width):
        row.update(_bounds_columns(cfg, model, ds, res.micromode, k, v["beta"]))
    return {"row": row}


def prevalence_cells(rows: pd.DataFrame) -> list[dict[str, Any]]:
    """Per-configuration rates from prevalence rows.

    Absence counts only searches that ended ABSENT; non-convergence and failed
    certificates are solver outcomes and go to ``failure_rate`` instead.
    """
    cells = []
    for keys, grp in rows.groupby(["beta", "d", "nu", "n", "k"], sort=True):
        beta, d, nu, n, k = keys
        given = grp[grp["a_n"]]
        cell = {
            "beta": beta,
            "d": d,
            "nu": nu,
            "n": n,
            "k": k,
            "replicates": len(grp),
            "p_a_n": _rate(grp["a_n"]),
            "n_a_n": len(given),
            "detected_given_a_n": _rate(given["found"]),
            "absence_rate": _rate(grp["status"] == DetectionStatus.ABSENT.value),
            "failure_rate": _rate(grp["status"].isin(_SOLVER_FAILURES)),
            "status_counts": grp["status"].value_counts().to_dict(),
        }
        if "bounds_ok" in grp:
            checked = grp[grp["found"] & (grp["event_a_violated"] == False)]  # noqa: E712
            cell["bounds_checked"] = len(checked)
            cell["bounds_pass_rate"] = _rate(checked["bounds_ok"].astype(bool))
        if beta == 1:
            cell["limit_gamma_tail"] = float(stats.gamma.sf(2.0 * np.sqrt(nu), k + 1))
            a_const = evt_constant_A(1.0, int(d))
            cell["limit_extreme_value"] = float(stats.gamma.cdf(a_const / (2.0 * np.sqrt(nu)), k + 1))
        cells.append(cell)
    return cells


def prevalence_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """Rates of A_n, of certified detection given A_n, of passing bound checks, of absence and of solver failure."""
    tasks = _tasks(cfg)
    rows, rejections = _collect(cfg, run_tasks(_prevalence_task, cfg, tasks, threads, progress))
    summary: dict[str, Any] = {**_counts(rejections, len(tasks)), "cells": prevalence_cells(rows) if len(rows) else []}
    failures = sum(cell["failure_rate"] * cell["replicates"] for cell in summary["cells"])
    if failures:
        logger.warning(f"{cfg.name}: {int(failures)} searches did not converge or failed certification")
    return StudyResult(config=cfg, rows=rows, summary=summary, rejections=rejections)


def _width_task(cfg: StudyConfig, point: GridPoint, replicate: int) -> dict[str, Any]:
    ds, seed = _dataset(cfg, point, replicate)
    v = point.values
    base = _base(point, replicate, seed)
    model = Model(nu=v["nu"], d=v["d"])
    res = locate(model, ds, v["k"])
    if not res.found:
        return _reject(base, f"detection {res.status.value}")
    mm = res.micromode
    if not np.isfinite(mm.width):
        return _reject(base, "unbounded width")
    row = {
        **base,
        "width": mm.width,
        "location_error": float(np.linalg.norm(mm.anchor - mm.x_plus)),
        "radial_scale": radial_scale(ds, v["k"], v["beta"]),
    }
    row.update(_bounds_columns(cfg, model, ds, mm, v["k"], v["beta"]))
    return {"row": row}


def width_scaling_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """Fit log width against log n over certified replicates; sandwich pass rates."""
    tasks = _tasks(cfg)
    rows, rejections = _collect(cfg, run_tasks(_width_task, cfg, tasks, threads, progress))
    summary: dict[str, Any] = {**_counts(rejections, len(tasks)), "bounds_proxy": cfg.bounds_proxy, "fits": []}
    if len(rows):
        for (beta, d, nu, k), grp in rows.groupby(["beta", "d", "nu", "k"], sort=True):
            checked = grp[grp["event_a_violated"] == False]  # noqa: E712
            fit = fit_loglog(grp["n"], grp["width"], target=1.0 / beta - 1.0)
            by_proxy = {p: grp[grp[f"event_a_violated_{p}"] == False] for p in PROXIES}  # noqa: E712
            summary["fits"].append(
                {
                    "beta": beta,
                    "d": d,
                    "nu": nu,
                    "k": k,
                    "fit": _fit_dict(fit),
                    "slope_consistent": _consistent(fit, WIDTH_SLOPE_TOL),
                    "sandwich_pass_rate": _rate(checked["bounds_ok"].astype(bool)),
                    "sandwich_checked": len(checked),
                    **{f"sandwich_pass_rate_{p}": _rate(c[f"bounds_ok_{p}"].astype(bool)) for p, c in by_proxy.items()},
                    "median_width_by_n": _by_n(grp, "width", "median"),
                }
            )
    return StudyResult(config=cfg, rows=rows, summary=summary, rejections=rejections)


def _score_task(cfg: StudyConfig, point: GridPoint, replicate: int) -> dict[str, Any]:
    ds, seed = _dataset(cfg, point, replicate)
    v = point.values
    base = _base(point, replicate, seed)
    model = Model(nu=v["nu"], d=v["d"])
    k, n = v["k"], v["n"]
    radius = order_radius(ds, k)
    if not radius > 2.0 * n * model.sqrt_nu:
        return _reject(base, "A_n false")
    deviation = score_deviation_sup(model, ds, k, cfg.grid_resolution)
    threshold = n ** (1.0 - 1.0 / v["beta"] - cfg.delta)
    row = {
        **base,
        "deviation": deviation,
        "threshold": threshold,
        "exceeded": bool(deviation >= threshold),
        "roughness": score_roughness(model, ds, order_statistic(ds, k), cfg.grid_resolution),
    }
    return {"row": row}


def score_approx_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """Exceedance frequency of the score-approximation error, conditional on A_n, per n."""
    tasks = _tasks(cfg)
    rows, rejections = _collect(cfg, run_tasks(_score_task, cfg, tasks, threads, progress))
    summary: dict[str, Any] = {**_counts(rejections, len(tasks)), "delta": cfg.delta, "trends": []}
    for beta, d, nu, k in itertools.product(cfg.beta, cfg.d, cfg.nu, cfg.k):
        per_n = []
        for n in cfg.n:
            sub = rows
            if len(rows):
                cell = (rows["beta"] == beta) & (rows["d"] == d) & (rows["nu"] == nu) & (rows["k"] == k)
                sub = rows[cell & (rows["n"] == n)]
            per_n.append(
                {
                    "n": n,
                    "conditioned": len(sub),
                    "p_a_n": len(sub) / cfg.replicates,
                    "exceedance": _rate(sub["exceeded"]) if len(sub) else float("nan"),
                    "median_roughness": float(sub["roughness"].median()) if len(sub) else float("nan"),
                }
            )
        freq = [p["exceedance"] for p in per_n]
        summary["trends"].append(
            {
                "beta": beta,
                "d": d,
                "nu": nu,
                "k": k,
                "by_n": per_n,
                "non_increasing": bool(np.all(np.diff(freq) <= 0)) if len(freq) > 1 else None,
                "spearman": spearman(cfg.n, freq),
            }
        )
    return StudyResult(config=cfg, rows=rows, summary=summary, rejections=rejections)


# ---- Extreme-value scaling ----


def _evt_task(cfg: StudyConfig, point: GridPoint, replicate: int) -> dict[str, Any]:
    ds, seed = _dataset(cfg, point, replicate)
    v = point.values
    k, beta = v["k"], v["beta"]
    radius = order_radius(ds, k)
    row = {
        **_base(point, replicate, seed),
        "radius": radius,
        "g": gk_proxy(ds, k, beta),
        # rescaled with n^(1/(2 beta)) instead of n^(1/beta)
        "g_control": float(evt_constant_A(beta, v["d"]) * (radius / v["n"] ** (0.5 / beta)) ** (-beta)),
    }
    return {"row": row}


def evt_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """KS distance of A (|Y_(n-k)|/n^(1/beta))^(-beta) to Gamma(k + 1, 1), with a wrongly scaled control."""
    tasks = _tasks(cfg)
    rows, rejections = _collect(cfg, run_tasks(_evt_task, cfg, tasks, threads, progress))
    summary: dict[str, Any] = {**_counts(rejections, len(tasks)), "cells": []}
    for (beta, d, k, n), grp in rows.groupby(["beta", "d", "k", "n"], sort=True):
        ks, pvalue = ks_gamma(grp["g"], k + 1)
        ks_control, _ = ks_gamma(grp["g_control"], k + 1)
        summary["cells"].append(
            {
                "beta": beta,
                "d": d,
                "k": k,
                "n": n,
                "replicates": len(grp),
                "ks": ks,
                "ks_pvalue": pvalue,
                "ks_control": ks_control,
                "mean_g": float(grp["g"].mean()),
            }
        )
    return StudyResult(config=cfg, rows=rows, summary=summary, rejections=rejections)


# ---- Contour grids ----


def _contour_task(cfg: StudyConfig, point: GridPoint, replicate: int) -> dict[str, Any]:
    ds, seed = _dataset(cfg, point, replicate)
    v = point.values
    model = Model(nu=v["nu"], d=2)
    anchor = order_statistic(ds, v["k"])
    half = cfg.window * model.sqrt_nu
    bbox = (anchor[0] - half, anchor[0] + half, anchor[1] - half, anchor[1] + half)
    grid = contour_grid(model, ds, bbox, cfg.resolution)

    maxima = grid_local_maxima(grid)
    near = [m for m in maxima if np.linalg.norm(grid.point(*m) - anchor) <= model.sqrt_nu]
    best = max(near, key=lambda m: grid.logpi[m], default=None)
    row = {
        **_base(point, replicate, seed),
        "a_n": bool(order_radius(ds, v["k"]) > 2.0 * v["n"] * model.sqrt_nu),
        "grid_maxima": len(maxima),
        "bump_near_anchor": best is not None,
        "bump_x1": grid.x1[best[0]] if best else float("nan"),
        "bump_x2": grid.x2[best[1]] if best else float("nan"),
    }
    artifacts = {}
    if replicate == 0:
        artifacts[f"grid_{point.index}"] = grid.to_frame()

    if cfg.regression:
        reg = simulate_regression(v["n"], v["beta"], derive_seed(seed, 2))
        found = ridge_maxima(reg, model.nu, lines=2, half_length=cfg.ridge_half_length)
        ridge_rows = []
        for j, (obs, maxima_on_line) in enumerate(found.items()):
            row[f"ridge{j}_observation"] = obs
            row[f"ridge{j}_maxima"] = len(maxima_on_line)
            ridge_rows.extend({"replicate": replicate, **mx.to_dict()} for mx in maxima_on_line)
        if replicate == 0:
            artifacts[f"ridge_{point.index}"] = pd.DataFrame(ridge_rows)
    return {"row": row, "artifacts": artifacts}


def contour_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """Zoom-in grids around Y_(n-k) and the regression ridge search."""
    tasks = _tasks(cfg)
    results = run_tasks(_contour_task, cfg, tasks, threads, progress)
    rows, rejections = _collect(cfg, results)
    artifacts: dict[str, pd.DataFrame] = {}
    for res in results:
        artifacts.update(res.get("artifacts", {}))

    summary: dict[str, Any] = {**_counts(rejections, len(tasks)), "resolution": cfg.resolution, "cells": []}
    for (beta, nu, n), grp in rows.groupby(["beta", "nu", "n"], sort=True):
        given = grp[grp["a_n"]]
        cell = {
            "beta": beta,
            "nu": nu,
            "n": n,
            "p_a_n": _rate(grp["a_n"]),
            "bump_rate_given_a_n": _rate(given["bump_near_anchor"]),
        }
        ridge_cols = [c for c in grp.columns if c.startswith("ridge") and c.endswith("_maxima")]
        if ridge_cols:
            cell["min_ridge_maxima"] = int(grp[ridge_cols].min().min())
        summary["cells"].append(cell)
    return StudyResult(config=cfg, rows=rows, summary=summary, rejections=rejections, artifacts=artifacts)


STUDIES: dict[StudyKind, Callable[..., StudyResult]] = {
    StudyKind.EXIT_SCALING: exit_scaling_study,
    StudyKind.PHASE_TRANSITION: phase_transition_study,
    StudyKind.PREVALENCE: prevalence_study,
    StudyKind.WIDTH_SCALING: width_scaling_study,
    StudyKind.SCORE_APPROX: score_approx_study,
    StudyKind.EVT: evt_study,
    StudyKind.CONTOUR: contour_study,
}


def run_study(cfg: StudyConfig, threads: int | None = None, progress: bool = True) -> StudyResult:
    """Dispatch ``cfg`` to its study driver."""
    logger.info(f"Starting {cfg.kind.value} study '{cfg.name}' (seed={cfg.seed})")
    result = STUDIES[cfg.kind](cfg, threads=threads, progress=progress)
    logger.info(f"Finished '{cfg.name}': {len(result.rows)} rows, {len(result.rejections)} rejections")
    return result
