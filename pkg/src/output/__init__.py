"""Output module: CSV/JSON writers and run manifests."""

from .writers import (
    RunManifest,
    read_points_csv,
    write_contour_csv,
    write_event_log_csv,
    write_json,
    json_default,
    write_manifest,
    write_points_csv,
    write_study_result,
)

__all__ = [
    "RunManifest",
    "write_points_csv",
    "read_points_csv",
    "write_event_log_csv",
    "write_contour_csv",
    "write_study_result",
    "write_json",
    "json_default",
    "write_manifest",
]
