"""Worker pool for study tasks.

Each task is a top-level function applied to (config, grid point,
replicate). Tasks own their RNG streams, so the pooled and serial paths
return the same results in task order.
"""

import os
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any

from tqdm import tqdm

from src.config.models import StudyConfig
from src.utils.logging import get_logger
from .models import GridPoint

logger = get_logger(__name__)

Task = tuple[GridPoint, int]
TaskFn = Callable[[StudyConfig, GridPoint, int], dict[str, Any]]


def _call(payload: tuple[TaskFn, StudyConfig, GridPoint, int]) -> dict[str, Any]:
    func, cfg, point, replicate = payload
    return func(cfg, point, replicate)


def resolve_workers(cfg: StudyConfig, threads: int | None = None) -> int:
    """--threads, then the config's ``threads``, then the available cores."""
    return max(1, threads or cfg.threads or os.cpu_count() or 1)


def run_tasks(
    func: TaskFn,
    cfg: StudyConfig,
    tasks: Sequence[Task],
    threads: int | None = None,
    progress: bool = True,
) -> list[dict[str, Any]]:
    """Run ``func`` over ``tasks`` and return the results in task order."""
    workers = min(resolve_workers(cfg, threads), max(1, len(tasks)))
    payloads = [(func, cfg, point, r) for point, r in tasks]
    logger.info(f"Running {len(payloads)} {cfg.kind.value} tasks on {workers} worker(s)")

    bar = {"total": len(payloads), "desc": cfg.name, "disable": not progress, "leave": False}
    if workers == 1:
        return [_call(p) for p in tqdm(payloads, **bar)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(tqdm(ex.map(_call, payloads), **bar))
