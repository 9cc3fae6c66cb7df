"""Configuration management for the claims benchmarking toolkit."""

import hashlib
import os
from datetime import date
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import (
    BaseSettings,
    JsonConfigSettingsSource,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from src.core.domain import Region, VmtSelection
from src.core.exceptions import ConfigurationError

CONFIG_ENV_VAR = "CLAIMSBENCH_CONFIG"


class VmtSource(BaseModel):
    """Names of the `vmt_inputs` rows that describe one operating region."""

    state: str
    urbanized_area: str


def default_vmt_sources() -> dict[Region, VmtSource]:
    return {
        Region.SAN_FRANCISCO: VmtSource(state="California", urbanized_area="San Francisco--Oakland, CA"),
        Region.PHOENIX: VmtSource(state="Arizona", urbanized_area="Phoenix--Mesa, AZ"),
    }


class Settings(BaseSettings):
    """Run configuration loaded from flags, environment and an optional JSON file."""

    model_config = SettingsConfigDict(
        env_prefix="CLAIMSBENCH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Paths
    inputs_dir: Path = Field(default=Path("./inputs"), description="Directory holding the input tables")
    output_dir: Path = Field(default=Path("./out"), description="Directory receiving reports")

    # Statistics
    confidence: float = Field(default=0.95, gt=0.0, lt=1.0, description="Two-sided confidence level")
    strict_mode: bool = Field(default=False, description="Abort the matrix on any empty fleet cell")
    vmt_selection: VmtSelection = Field(
        default=VmtSelection.AUTO,
        description="VMT estimate rule: auto (conservative), state or urban",
    )
    seed: int = Field(default=20230801, description="Master seed for simulations")

    # Study windows
    human_window_start: date = Field(default=date(2016, 1, 1))
    human_window_end: date = Field(default=date(2021, 12, 31))
    fleet_window_start: date = Field(default=date(2018, 1, 1))
    fleet_window_end: date = Field(default=date(2023, 8, 1))

    region_vmt_sources: dict[Region, VmtSource] = Field(default_factory=default_vmt_sources)

    # Logging
    log_level: str = Field(default="INFO", description="Logging level")
    log_format: str = Field(default="text", description="Log format (json or text)")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        """Flags win over environment, environment over the config file."""
        sources: list[PydanticBaseSettingsSource] = [init_settings, env_settings, dotenv_settings]
        config_path = os.environ.get(CONFIG_ENV_VAR)
        if config_path:
            path = Path(config_path)
            if not path.is_file():
                raise ConfigurationError(
                    f"Config file not found: {path}",
                    details={"env": CONFIG_ENV_VAR},
                )
            sources.append(JsonConfigSettingsSource(settings_cls, json_file=path))
        return tuple(sources)

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Only json and text renderers exist."""
        if v not in ("json", "text"):
            raise ValueError("log_format must be 'json' or 'text'")
        return v

    @model_validator(mode="after")
    def validate_windows(self) -> "Settings":
        """Study windows must not be inverted."""
        if self.human_window_start > self.human_window_end:
            raise ValueError("human study window is inverted")
        if self.fleet_window_start > self.fleet_window_end:
            raise ValueError("fleet study window is inverted")
        return self

    def digest(self) -> str:
        """SHA-256 of the settings that influence computed outputs."""
        payload = self.model_dump_json(exclude={"log_level", "log_format", "inputs_dir", "output_dir"})
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def load_settings(**overrides: Any) -> Settings:
    """Build settings with CLI overrides; ``None`` means "not given"."""
    given = {key: value for key, value in overrides.items() if value is not None}
    try:
        return Settings(**given)
    except ValueError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e
