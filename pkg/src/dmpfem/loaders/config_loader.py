"""Settings loading from TOML files."""

# this_file: src/dmpfem/loaders/config_loader.py

from pathlib import Path
from typing import Any

try:
    import tomllib
except ImportError:  # pragma: no cover
    import tomli as tomllib

from pydantic import ValidationError as PydanticValidationError

from dmpfem.api.exceptions import ConfigurationError
from dmpfem.core.settings import DEFAULT_SETTINGS, Settings
from dmpfem.utils.logging import logger

TABLE = "dmpfem"


def settings_from_mapping(data: dict[str, Any], source: str = "<mapping>") -> Settings:
    """Build settings from a ``[dmpfem]``-style mapping.

    Raises:
        ConfigurationError: On unknown keys or values failing validation.
    """
    unknown = sorted(set(data) - set(Settings.model_fields))
    if unknown:
        raise ConfigurationError(
            source, f"unknown setting(s): {', '.join(unknown)}", {"unknown": unknown}
        )
    try:
        return Settings(**data)
    except PydanticValidationError as e:
        raise ConfigurationError(source, str(e), {"errors": e.errors()}) from e


def load_settings(path: str | Path | None = None) -> Settings:
    """Load settings from a TOML file, or return the defaults when no path is given.

    Args:
        path: TOML file whose ``[dmpfem]`` table overrides the defaults.

    Raises:
        ConfigurationError: If the file is missing, unparsable, or has invalid keys.
    """
    if path is None:
        return DEFAULT_SETTINGS

    toml_path = Path(path)
    if not toml_path.exists():
        raise ConfigurationError(
            "config_file", f"Config file not found: {toml_path}", {"path": str(toml_path)}
        )
    try:
        with toml_path.open("rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(
            "config_file",
            f"Failed to parse TOML file: {e}",
            {"path": str(toml_path), "error": str(e)},
        ) from e

    table = data.get(TABLE, {})
    if not isinstance(table, dict):
        raise ConfigurationError("config_file", f"[{TABLE}] must be a table", {"path": str(toml_path)})
    settings = settings_from_mapping(table, str(toml_path))
    logger.info(f"Loaded settings from {toml_path}")
    logger.debug(f"Settings: {settings.model_dump(mode='json')}")
    return settings
