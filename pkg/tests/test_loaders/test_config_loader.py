"""Tests for TOML settings loading."""

from pathlib import Path

import pytest

from dmpfem.api.exceptions import ConfigurationError
from dmpfem.core.settings import DEFAULT_SETTINGS, QuadratureName
from dmpfem.loaders.config_loader import load_settings, settings_from_mapping


class TestLoadSettings:
    def test_defaults_without_path(self) -> None:
        assert load_settings() is DEFAULT_SETTINGS

    def test_overrides(self, tmp_path: Path) -> None:
        config = tmp_path / "dmpfem.toml"
        config.write_text(
            '[dmpfem]\nangle_tol = 1e-8\nquadrature = "centroid"\nmax_passes = 3\n',
            encoding="utf-8",
        )
        settings = load_settings(config)
        assert settings.angle_tol == 1e-8
        assert settings.quadrature is QuadratureName.CENTROID
        assert settings.max_passes == 3
        assert settings.delaunay_seed == DEFAULT_SETTINGS.delaunay_seed

    def test_missing_table_gives_defaults(self, tmp_path: Path) -> None:
        config = tmp_path / "other.toml"
        config.write_text("[tool]\nname = 'x'\n", encoding="utf-8")
        assert load_settings(config) == DEFAULT_SETTINGS

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError, match="not found"):
            load_settings(tmp_path / "absent.toml")

    def test_bad_toml(self, tmp_path: Path) -> None:
        config = tmp_path / "broken.toml"
        config.write_text("[dmpfem\nangle_tol = ", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="Failed to parse"):
            load_settings(config)

    def test_table_must_be_table(self, tmp_path: Path) -> None:
        config = tmp_path / "flat.toml"
        config.write_text("dmpfem = 3\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="must be a table"):
            load_settings(config)


class TestSettingsFromMapping:
    def test_unknown_key(self) -> None:
        with pytest.raises(ConfigurationError, match="unknown setting") as exc_info:
            settings_from_mapping({"angle_tolerance": 1.0})
        assert exc_info.value.details["unknown"] == ["angle_tolerance"]

    @pytest.mark.parametrize(
        "data",
        [{"angle_tol": -1.0}, {"fourway_fraction": 1.0}, {"delaunay_jitter": 0.6}, {"quadrature": "gauss"}],
    )
    def test_invalid_values(self, data: dict) -> None:
        with pytest.raises(ConfigurationError):
            settings_from_mapping(data)
