"""Configuration loader for study files."""

import json
import os
import tomllib
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from src.utils.errors import ConfigurationError
from src.utils.logging import get_logger
from .models import StudyConfig

logger = get_logger(__name__)

SEED_ENV = "MICROMODE_SEED"


class ConfigLoader:
    """Loads and validates study configuration files (TOML, YAML or JSON)."""

    def __init__(self, config_dir: Path | None = None):
        """Initialize the config loader.

        Args:
            config_dir: Directory searched for relative paths that do not
                exist from the working directory. Defaults to the shipped studies.
        """
        self.config_dir = config_dir or (Path(__file__).parent / "studies")

    def load_study(self, study_file: str | Path, overrides: dict[str, Any] | None = None) -> StudyConfig:
        """Load a study configuration.

        The MICROMODE_SEED environment variable replaces the file's seed;
        ``overrides`` are applied last.

        Args:
            study_file: Path to the study file
            overrides: Extra key/value pairs, e.g. from command-line flags

        Returns:
            Validated StudyConfig

        Raises:
            ConfigurationError: If the file is missing, unparsable or violates the schema
        """
        path = self._resolve_path(study_file)
        data = self._load(path)
        env_seed = os.environ.get(SEED_ENV)
        if env_seed:
            try:
                data["seed"] = int(env_seed)
            except ValueError as e:
                raise ConfigurationError(f"{SEED_ENV} must be an integer, got '{env_seed}'", keys=["seed"]) from e
            logger.info(f"Seed overridden from {SEED_ENV}: {data['seed']}")
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return self.validate(data)

    @staticmethod
    def validate(data: dict[str, Any]) -> StudyConfig:
        """Validate a mapping into a StudyConfig, collecting offending keys."""
        try:
            return StudyConfig.model_validate(data)
        except ValidationError as e:
            keys = sorted({".".join(str(p) for p in err["loc"]) or "<root>" for err in e.errors()})
            details = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
            )
            raise ConfigurationError(f"Invalid study config ({details})", keys=keys) from e

    def _resolve_path(self, file_path: str | Path) -> Path:
        """Resolve a config file path."""
        path = Path(file_path)
        if not path.is_absolute() and not path.exists():
            path = self.config_dir / path
        return path

    def _load(self, path: Path) -> dict[str, Any]:
        if not path.exists():
            raise ConfigurationError(f"Config file not found: {path}", keys=["config"])
        suffix = path.suffix.lower()
        readers = {
            ".toml": self._load_toml,
            ".yml": self._load_yaml,
            ".yaml": self._load_yaml,
            ".json": self._load_json,
        }
        if suffix not in readers:
            raise ConfigurationError(f"Unsupported config format '{suffix}' for {path}", keys=["config"])
        try:
            data = readers[suffix](path)
        except (tomllib.TOMLDecodeError, yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Could not parse {path}: {e}", keys=["config"]) from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path} must contain a table of keys", keys=["config"])
        return data

    def _load_toml(self, path: Path) -> dict[str, Any]:
        """Load and parse a TOML file."""
        with open(path, "rb") as f:
            return tomllib.load(f)

    def _load_yaml(self, path: Path) -> dict[str, Any]:
        """Load and parse a YAML file."""
        with open(path, encoding="utf-8") as f:
            return yaml.safe_load(f) or {}

    def _load_json(self, path: Path) -> dict[str, Any]:
        """Load and parse a JSON file."""
        with open(path, encoding="utf-8") as f:
            return json.load(f)
