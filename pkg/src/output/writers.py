"""
CSV and JSON writers for datasets, event logs, study results and manifests.

Floats are written with 17 significant digits so that reading a file back
gives the same doubles.
"""

import json
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from src import __version__
from src.experiments.contours import ContourGrid
from src.experiments.models import StudyResult
from src.heavytail.models import DataConfig, Dataset
from src.utils.errors import DataFileError
from src.utils.files import ensure_dir, file_digest
from src.utils.logging import get_logger
from src.zigzag.models import EventLog

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"


def json_default(obj: Any) -> Any:
    """``default`` hook for json.dump: numpy scalars and arrays, paths, enums."""
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def write_json(data: dict[str, Any], path: Path) -> Path:
    """Write ``data`` as indented UTF-8 JSON, converting numpy scalars and arrays."""
    ensure_dir(path.parent)
    with path.open("w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2, default=json_default)
    return path


def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    ensure_dir(path.parent)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8")
    return path


def write_points_csv(ds: Dataset, path: Path) -> Path:
    """Write the points with header y1..yd, one row per observation."""
    columns = [f"y{j + 1}" for j in range(ds.d)]
    _write_frame(pd.DataFrame(ds.points, columns=columns), path)
    logger.info(f"Wrote {ds.n} points to {path}")
    return path


def read_points_csv(path: Path, config: DataConfig | None = None) -> Dataset:
    """Read a points file written by :func:`write_points_csv`.

    Raises:
        DataFileError: If the file is missing, unreadable or malformed
    """
    path = Path(path)
    if not path.exists():
        raise DataFileError(f"Data file not found: {path}")
    try:
        frame = pd.read_csv(path)
    except (OSError, ValueError, pd.errors.ParserError) as e:
        raise DataFileError(f"Could not read {path}: {e}") from e

    expected = [f"y{j + 1}" for j in range(frame.shape[1])]
    if frame.shape[1] == 0 or list(frame.columns) != expected:
        raise DataFileError(f"{path} must have header {','.join(expected) or 'y1'}, got {list(frame.columns)}")
    if frame.empty:
        raise DataFileError(f"{path} has no data rows")
    try:
        points = frame.to_numpy(dtype=float)
    except ValueError as e:
        raise DataFileError(f"{path} contains non-numeric values: {e}") from e
    if not np.all(np.isfinite(points)):
        raise DataFileError(f"{path} contains non-finite values")
    return Dataset.from_points(points, config=config)


def write_event_log_csv(log: EventLog, path: Path) -> Path:
    """Write the skeleton (t, x, v): initial state, every switch, final state."""
    return _write_frame(log.to_frame(), path)


def write_contour_csv(grid: ContourGrid, path: Path) -> Path:
    """Write flat (x1, x2, logpi) triples."""
    return _write_frame(grid.to_frame(), path)


def write_study_result(result: StudyResult, out_dir: Path) -> list[Path]:
    """Write rows, rejections, extra tables and summary.json into ``out_dir``.

    Returns:
        Paths written, rows CSV first
    """
    out_dir = ensure_dir(Path(out_dir))
    name = result.name
    paths = [_write_frame(result.rows, out_dir / f"{name}.csv")]
    if len(result.rejections):
        paths.append(_write_frame(result.rejections, out_dir / f"{name}_rejections.csv"))
    for key, frame in sorted(result.artifacts.items()):
        paths.append(_write_frame(frame, out_dir / f"{name}_{key}.csv"))

    summary = {"name": name, "kind": result.config.kind.value, "seed": result.config.seed, **result.summary}
    paths.append(write_json(summary, out_dir / "summary.json"))
    logger.info(f"Wrote {len(result.rows)} rows and {len(paths)} files to {out_dir}")
    return paths


@dataclass
class RunManifest:
    """Everything needed to reproduce an output: version, resolved config, seed, digests."""

    command: str
    config: dict[str, Any]
    seed: int | None
    version: str = __version__
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    runtime_seconds: float = 0.0
    outputs: dict[str, str] = field(default_factory=dict)
    _t0: float = field(default_factory=time.perf_counter, init=False, repr=False)

    def finish(self, paths: list[Path]) -> "RunManifest":
        """Stamp the runtime and record sha256 digests of ``paths``."""
        self.runtime_seconds = time.perf_counter() - self._t0
        self.outputs = {p.name: file_digest(p) for p in paths}
        return self

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data.pop("_t0")
        return data


def write_manifest(manifest: RunManifest, out_dir: Path, name: str = "manifest.json") -> Path:
    """Write the manifest next to the outputs it describes."""
    return write_json(manifest.to_dict(), ensure_dir(Path(out_dir)) / name)
