"""Tests for configuration."""

import json
import os
from datetime import date
from pathlib import Path
from unittest.mock import patch

import pytest

from src.core.config import Settings, load_settings
from src.core.domain import Region, VmtSelection
from src.core.exceptions import ConfigurationError


def test_default_values() -> None:
    """Test default configuration values."""
    with patch.dict(os.environ, {}, clear=True):
        settings = Settings()

        assert settings.confidence == 0.95
        assert settings.vmt_selection is VmtSelection.AUTO
        assert settings.strict_mode is False
        assert settings.log_level == "INFO"
        assert settings.human_window_start == date(2016, 1, 1)
        assert settings.fleet_window_end == date(2023, 8, 1)
        assert settings.region_vmt_sources[Region.PHOENIX].state == "Arizona"


def test_settings_from_env() -> None:
    """Test loading settings from environment variables."""
    env = {
        "CLAIMSBENCH_CONFIDENCE": "0.9",
        "CLAIMSBENCH_VMT_SELECTION": "state",
        "CLAIMSBENCH_STRICT_MODE": "true",
    }

    with patch.dict(os.environ, env, clear=True):
        settings = Settings()

        assert settings.confidence == 0.9
        assert settings.vmt_selection is VmtSelection.STATE
        assert settings.strict_mode is True


def test_config_file_and_priority(tmp_path: Path) -> None:
    """Test that flags beat environment and environment beats the config file."""
    config_file = tmp_path / "claimsbench.json"
    config_file.write_text(
        json.dumps({"confidence": 0.8, "vmt_selection": "urban", "seed": 11}),
        encoding="utf-8",
    )
    env = {"CLAIMSBENCH_CONFIG": str(config_file), "CLAIMSBENCH_CONFIDENCE": "0.9"}

    with patch.dict(os.environ, env, clear=True):
        from_file = Settings()
        assert from_file.vmt_selection is VmtSelection.URBAN
        assert from_file.seed == 11
        assert from_file.confidence == 0.9

        flagged = load_settings(confidence=0.99, seed=None)
        assert flagged.confidence == 0.99
        assert flagged.seed == 11


def test_missing_config_file(tmp_path: Path) -> None:
    """Test that a named but absent config file is a configuration error."""
    env = {"CLAIMSBENCH_CONFIG": str(tmp_path / "nope.json")}

    with patch.dict(os.environ, env, clear=True):
        with pytest.raises(ConfigurationError, match="not found") as info:
            load_settings()
        assert info.value.exit_code == 2


@pytest.mark.parametrize("confidence", [0.0, 1.0, 1.5, -0.1])
def test_invalid_confidence(confidence: float) -> None:
    """Test that confidence must lie strictly between 0 and 1."""
    with patch.dict(os.environ, {}, clear=True):
        with pytest.raises(ConfigurationError):
            load_settings(confidence=confidence)


def test_inverted_window() -> None:
    """Test validation of study windows."""
    with patch.dict(os.environ, {}, clear=True):
        with pytest.raises(ConfigurationError, match="inverted"):
            load_settings(human_window_start=date(2022, 1, 1))


def test_invalid_log_format() -> None:
    """Test validation of log format."""
    with patch.dict(os.environ, {}, clear=True):
        with pytest.raises(ConfigurationError, match="log_format"):
            load_settings(log_format="xml")


def test_digest_ignores_paths_and_logging() -> None:
    """Test that the digest tracks only settings that change results."""
    with patch.dict(os.environ, {}, clear=True):
        base = Settings()
        moved = Settings(inputs_dir=Path("/elsewhere"), log_level="DEBUG")
        changed = Settings(confidence=0.9)

        assert base.digest() == moved.digest()
        assert base.digest() != changed.digest()
        assert len(base.digest()) == 64


def test_load_settings_reads_environment_each_call() -> None:
    """Test that each call sees the current environment and digest."""
    with patch.dict(os.environ, {"CLAIMSBENCH_CONFIDENCE": "0.9"}, clear=True):
        first = load_settings()
    with patch.dict(os.environ, {"CLAIMSBENCH_CONFIDENCE": "0.99"}, clear=True):
        second = load_settings()

    assert (first.confidence, second.confidence) == (0.9, 0.99)
    assert first.digest() != second.digest()
