"""
Command-line front end.

Usage:
    micromode generate --beta 0.5 --dim 1 --n 3000 --seed 7 --out data/points.csv
    micromode micromode --data data/points.csv --nu 1 --k 0 --beta 0.5
    micromode zigzag --data two_point.csv --kind subsampling --exit --traj 40
    micromode zigzag --data one_point.csv --horizon 1e5
    micromode study --config phase_transition.toml --out outputs/phase_transition --threads 4

Reports go to stdout as JSON; logs go to stderr. Exit codes: 0 success,
1 runtime or data error, 2 usage or configuration error.
"""

import json
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import typer
from dotenv import load_dotenv

from src.config.loader import ConfigLoader
from src.experiments.studies import run_study
from src.heavytail.models import DataConfig, Dataset
from src.heavytail.sampling import isolation_gap, order_radius, sample_dataset
from src.micromode.bounds import default_m1, dn_bounds, event_flags, g_proxy, theorem_bounds_check
from src.micromode.detection import locate
from src.micromode.models import DnCertificate
from src.output.writers import (
    RunManifest,
    json_default,
    read_points_csv,
    write_event_log_csv,
    write_json,
    write_manifest,
    write_points_csv,
    write_study_result,
)
from src.posterior.models import Model
from src.utils.errors import ConfigurationError, ContractError, DomainError, MicromodeError, OrderIndexError
from src.utils.logging import get_logger, setup_logging
from src.utils.rng import make_rng
from src.zigzag.exit import exit_levels, exit_time
from src.zigzag.models import RateKind, ThinningBound, ZigZagState
from src.zigzag.renewal import gamma_sup, p_tau_exact, p_tau_sandwich, pn_exact
from src.zigzag.simulator import DEFAULT_T_MAX, ks_distance, simulate

logger = get_logger(__name__)

app = typer.Typer(
    help="Micromode laboratory for heavy-tailed Bayesian location posteriors.",
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)


class Proxy(str, Enum):
    GAMMA = "gamma"
    RADIAL = "radial"


# ---- Helpers ----


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map library errors onto the exit-code contract."""
    try:
        yield
    except (ConfigurationError, OrderIndexError) as e:
        logger.error(str(e))
        raise typer.Exit(code=2) from e
    except MicromodeError as e:
        logger.error(str(e))
        raise typer.Exit(code=1) from e


def _positive(value: float | None) -> float | None:
    if value is not None and not value > 0:
        raise typer.BadParameter(f"must be positive, got {value}")
    return value


def _emit(report: dict[str, Any]) -> None:
    typer.echo(json.dumps(report, indent=2, default=json_default))


def _load_dataset(data: Path | None, beta: float | None, dim: int, n: int | None, seed: int) -> Dataset:
    """Read ``data`` or generate a dataset from --beta/--dim/--n/--seed."""
    if data is not None:
        return read_points_csv(data)
    if beta is None or n is None:
        raise ConfigurationError("Pass --data, or --beta and --n to generate a dataset", keys=["data", "beta", "n"])
    return sample_dataset(DataConfig(beta=beta, d=dim, n=n, seed=seed))


def _flags(
    model: Model, ds: Dataset, k: int, beta: float | None, eps: float, delta: float, proxy: Proxy
) -> dict[str, bool | None]:
    """Event flags; B_n, A and E_n need the tail index and are None without it."""
    if beta is not None or ds.beta is not None:
        return event_flags(model, ds, k, eps, delta, beta=beta, proxy=proxy.value).to_dict()
    r = order_radius(ds, k)
    return {
        "A_n": bool(r > 2.0 * ds.n * model.sqrt_nu),
        "A_prime_n": bool(isolation_gap(ds, k) > r / (2.0 * ds.n**eps)) if ds.n >= 2 else None,
        "B_n": None,
        "A": None,
        "E_n": None,
    }


def _dn(model: Model, ds: Dataset, k: int, beta: float | None, proxy: Proxy) -> DnCertificate | None:
    """d_n certificate with m1 = (G + c_beta) / 2; None without a tail index in (0, 1] or when m1 <= c_beta."""
    if beta is None or not 0 < beta <= 1:
        return None
    try:
        g = g_proxy(ds, k, beta, proxy.value)
        return dn_bounds(ds.n, beta, model.nu, default_m1(g, beta, model.nu))
    except DomainError as e:
        logger.debug(f"No d_n certificate at k={k}: {e}")
        return None


def _data_config(data: Path | None, ds: Dataset) -> dict[str, Any]:
    if data is not None:
        return {"data": str(data)}
    return ds.config.to_dict() if ds.config else {}


# ---- Commands ----


@app.callback()
def main(
    log_level: str = typer.Option("INFO", "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
    rich_logs: bool = typer.Option(False, "--rich-logs", help="Render logs with rich"),
) -> None:
    load_dotenv()
    setup_logging(log_level, rich=rich_logs)


@app.command()
def generate(
    beta: float = typer.Option(..., "--beta", callback=_positive, help="Tail index (degrees of freedom)"),
    dim: int = typer.Option(1, "--dim", min=1, help="Dimension d"),
    n: int = typer.Option(..., "--n", min=2, help="Number of observations"),
    seed: int = typer.Option(0, "--seed", min=0, help="Data seed"),
    out: Path = typer.Option(..., "--out", help="Points CSV to write"),
) -> None:
    """Draw an isotropic multivariate-t dataset and write it as CSV."""
    with _exit_codes():
        cfg = DataConfig(beta=beta, d=dim, n=n, seed=seed)
        manifest = RunManifest(command="generate", config=cfg.to_dict(), seed=seed)
        path = write_points_csv(sample_dataset(cfg), out)
        write_manifest(manifest.finish([path]), out.parent, name=f"{out.stem}.manifest.json")
        _emit({"points": str(path), "n": n, "d": dim, "beta": beta, "seed": seed})


@app.command()
def micromode(
    data: Path | None = typer.Option(None, "--data", help="Points CSV (header y1..yd)"),
    beta: float | None = typer.Option(None, "--beta", callback=_positive, help="Tail index"),
    dim: int = typer.Option(1, "--dim", min=1),
    n: int | None = typer.Option(None, "--n", min=2),
    seed: int = typer.Option(0, "--seed", min=0),
    nu: float = typer.Option(1.0, "--nu", callback=_positive, help="Likelihood degrees of freedom"),
    k: int = typer.Option(0, "--k", min=0, help="Order index from the top"),
    eps: float = typer.Option(0.25, "--eps"),
    delta: float = typer.Option(0.25, "--delta"),
    proxy: Proxy = typer.Option(Proxy.GAMMA, "--proxy", help="Plug-in for G_k"),
    out: Path | None = typer.Option(None, "--out", help="Also write the report here"),
) -> None:
    """Detect, certify and measure the micromode anchored at Y_(n-k)."""
    with _exit_codes():
        ds = _load_dataset(data, beta, dim, n, seed)
        model = Model(nu=nu, d=ds.d)
        b = beta if beta is not None else ds.beta
        dn = _dn(model, ds, k, b, proxy)
        res = locate(model, ds, k, dn=dn)
        mm = res.micromode if res.found else None
        report: dict[str, Any] = {
            "found": res.found,
            "status": res.status.value,
            "k": k,
            "n": ds.n,
            "d": ds.d,
            "nu": nu,
            "anchor": mm.anchor.tolist() if mm else None,
            "x_plus": mm.x_plus.tolist() if mm else None,
            "width": mm.width if mm else None,
            "x_minus": mm.x_minus if mm else None,
            "certificate": mm.certificate.to_dict() if mm and mm.certificate else None,
            "certification_radius": res.certification_radius,
            "pd_radius": res.pd_radius,
            "d_n": dn.to_dict() if dn else None,
            "flags": _flags(model, ds, k, beta, eps, delta, proxy),
            "bounds": None,
        }
        if mm is not None and b is not None and b <= 1 and np.isfinite(mm.width):
            report["bounds"] = theorem_bounds_check(model, ds, mm, g_proxy(ds, k, b, proxy.value), b).to_dict()
        if out is not None:
            manifest = RunManifest(command="micromode", config={**_data_config(data, ds), "nu": nu, "k": k}, seed=seed)
            path = write_json(report, out)
            write_manifest(manifest.finish([path]), out.parent, name=f"{out.stem}.manifest.json")
        _emit(report)


@app.command()
def zigzag(
    data: Path | None = typer.Option(None, "--data", help="Points CSV (one-dimensional)"),
    beta: float | None = typer.Option(None, "--beta", callback=_positive),
    n: int | None = typer.Option(None, "--n", min=2),
    seed: int = typer.Option(0, "--seed", min=0, help="Data seed; trajectories use derived streams"),
    nu: float = typer.Option(1.0, "--nu", callback=_positive),
    kind: RateKind = typer.Option(RateKind.CANONICAL, "--kind", help="Switching rates"),
    horizon: float | None = typer.Option(None, "--horizon", callback=_positive, help="Simulate up to this time"),
    exit_: bool = typer.Option(False, "--exit", help="Simulate exit times from the micromode"),
    traj: int = typer.Option(1, "--traj", min=1, help="Number of trajectories"),
    t_max: float = typer.Option(DEFAULT_T_MAX, "--t-max", callback=_positive, help="Censoring time for --exit"),
    thinning: ThinningBound = typer.Option(ThinningBound.GLOBAL, "--thinning"),
    x0: float | None = typer.Option(None, "--x0", help="Start for --horizon (default: median of the data)"),
    k: int = typer.Option(0, "--k", min=0),
    out_dir: Path | None = typer.Option(None, "--out-dir", help="Write event logs and summary here"),
) -> None:
    """Simulate one-dimensional Zig-Zag trajectories."""
    with _exit_codes():
        if (horizon is None) == (not exit_):
            raise ConfigurationError("Pass exactly one of --horizon or --exit", keys=["horizon", "exit"])
        ds = _load_dataset(data, beta, 1, n, seed)
        model = Model(nu=nu, d=ds.d)

        logs = []
        summary: dict[str, Any] = {"kind": kind.value, "trajectories": traj, "n": ds.n, "nu": nu}
        if exit_:
            found = locate(model, ds, k)
            if not found.found:
                raise ContractError(f"--exit needs a certified micromode; detection returned {found.status.value}")
            mm = found.micromode
            results = [
                exit_time(model, ds, kind, mm, make_rng(seed, 1, t), t_max, thinning=thinning, keep_log=True)
                for t in range(traj)
            ]
            logs = [r.log for r in results]
            ds_r, x_minus, x_plus = exit_levels(model, ds, mm)
            p_n = pn_exact(model, ds_r, x_minus, x_plus)
            lower, upper = p_tau_sandwich(p_n, gamma_sup(model, ds_r, x_minus, x_plus), mm.width)
            p_exit = float(np.mean([r.first_excursion_exit for r in results]))
            stderr = float(np.sqrt(p_exit * (1.0 - p_exit) / traj))
            summary.update(
                {
                    "x_plus": x_plus,
                    "x_minus": x_minus,
                    "width": mm.width,
                    "mean_tau": float(np.mean([r.tau for r in results])),
                    "censored_rate": float(np.mean([r.censored for r in results])),
                    "p_exit": p_exit,
                    "p_exit_stderr": stderr,
                    "p_n": p_n,
                    "p_tau_exact": p_tau_exact(model, ds_r, kind, x_minus, x_plus),
                    "sandwich": [lower, upper],
                    "within_sandwich": bool(lower - 3.0 * stderr <= p_exit <= upper + 3.0 * stderr),
                }
            )
        else:
            start = float(np.median(ds.points[:, 0])) if x0 is None else x0
            spread = 20.0 * model.sqrt_nu
            grid = np.linspace(ds.points.min() - spread, ds.points.max() + spread, 4001)
            kss = []
            for t in range(traj):
                rng = make_rng(seed, 1, t)
                log = simulate(model, ds, kind, ZigZagState(x=start, v=1), (), horizon, rng, thinning=thinning)
                logs.append(log)
                kss.append(ks_distance(log, model, ds, grid))
            summary.update(
                {
                    "horizon": horizon,
                    "x0": start,
                    "ks": kss,
                    "mean_ks": float(np.mean(kss)),
                    "mean_switches": float(np.mean([log.n_switches for log in logs])),
                }
            )

        if out_dir is not None:
            paths = [write_event_log_csv(log, out_dir / f"trajectory_{t}.csv") for t, log in enumerate(logs)]
            paths.append(write_json(summary, out_dir / "summary.json"))
            config = {**_data_config(data, ds), "nu": nu, "kind": kind.value, "traj": traj, "horizon": horizon}
            manifest = RunManifest(command="zigzag", config={**config, "exit": exit_, "t_max": t_max}, seed=seed)
            write_manifest(manifest.finish(paths), out_dir)
        _emit(summary)


@app.command()
def study(
    config: Path = typer.Option(..., "--config", help="Study file (TOML, YAML or JSON)"),
    out: Path | None = typer.Option(None, "--out", help="Output directory (default: outputs/<name>)"),
    threads: int | None = typer.Option(None, "--threads", min=1, help="Worker processes (default: all cores)"),
    progress: bool = typer.Option(True, "--progress/--no-progress"),
) -> None:
    """Run a study from a configuration file."""
    with _exit_codes():
        cfg = ConfigLoader().load_study(config, overrides={"output": out, "threads": threads})
        manifest = RunManifest(command="study", config=cfg.to_dict(), seed=cfg.seed)
        result = run_study(cfg, threads=threads, progress=progress)
        out_dir = cfg.output or Path("outputs") / cfg.name
        paths = write_study_result(result, out_dir)
        write_manifest(manifest.finish(paths), out_dir)
        _emit(
            {
                "study": cfg.name,
                "kind": cfg.kind.value,
                "rows": len(result.rows),
                "rejections": len(result.rejections),
                "out_dir": str(out_dir),
                "files": [p.name for p in paths],
            }
        )


if __name__ == "__main__":
    app()
