"""Simulation configuration (`simconfig.json`)."""

import json
from pathlib import Path
from typing import Annotated

from pydantic import BaseModel, Field, StringConstraints, ValidationError, model_validator

from src.core.config import VmtSource, default_vmt_sources
from src.core.domain import Coverage, DrivingMode, Region
from src.core.exceptions import ConfigurationError
from src.ingestion.models import ZIP_PATTERN

MILES_PER_MMI = 1e6

ZipCode = Annotated[str, StringConstraints(pattern=ZIP_PATTERN)]


class SimRegion(BaseModel):
    """Human population of one region with known true claim frequencies."""

    name: Region
    zip_codes: list[ZipCode] = Field(min_length=1)
    true_rate_cpmm: dict[Coverage, float]
    vmt_per_vehicle: dict[int, float] = Field(min_length=1, description="Annual miles per vehicle by year")
    policy_years: dict[int, float] | None = None
    exposure_mmi: float | None = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def check_exposure(self) -> "SimRegion":
        if any(rate < 0 for rate in self.true_rate_cpmm.values()):
            raise ValueError("true rates must be non-negative")
        if any(vmt <= 0 for vmt in self.vmt_per_vehicle.values()):
            raise ValueError("vmt_per_vehicle must be positive")

        if (self.policy_years is None) == (self.exposure_mmi is None):
            raise ValueError("give exactly one of policy_years or exposure_mmi")
        if self.policy_years is not None:
            if any(py <= 0 for py in self.policy_years.values()):
                raise ValueError("policy_years must be positive")
            missing = sorted(set(self.policy_years) - set(self.vmt_per_vehicle))
            if missing:
                raise ValueError(f"no vmt_per_vehicle for policy years {missing}")
        return self

    def policy_years_by_year(self) -> dict[int, float]:
        """Policy-years per year; a total exposure is spread evenly over the VMT years."""
        if self.policy_years is not None:
            return dict(sorted(self.policy_years.items()))
        assert self.exposure_mmi is not None
        share = self.exposure_mmi * MILES_PER_MMI / len(self.vmt_per_vehicle)
        return {year: share / vmt for year, vmt in sorted(self.vmt_per_vehicle.items())}

    def exposure_by_year(self) -> dict[int, float]:
        """Exposure in Mmi per year."""
        return {
            year: py * self.vmt_per_vehicle[year] / MILES_PER_MMI
            for year, py in self.policy_years_by_year().items()
        }

    @property
    def total_exposure_mmi(self) -> float:
        return sum(self.exposure_by_year().values())


class SimFleetMode(BaseModel):
    """Fleet miles and true frequencies of one driving mode."""

    mode: DrivingMode
    miles: dict[Region, float]
    true_rate_cpmm: dict[Coverage, float]

    @model_validator(mode="after")
    def check_values(self) -> "SimFleetMode":
        if any(m < 0 for m in self.miles.values()):
            raise ValueError("miles must be non-negative")
        if any(rate < 0 for rate in self.true_rate_cpmm.values()):
            raise ValueError("true rates must be non-negative")
        return self


class SimConfig(BaseModel):
    """Everything needed to generate a synthetic dataset and the coverage summary."""

    seed: int = 20230801
    trials: int = Field(default=100_000, ge=10_000)
    confidence: float = Field(default=0.95, gt=0.0, lt=1.0)
    regions: list[SimRegion] = Field(min_length=1)
    fleet: list[SimFleetMode] = Field(default_factory=list)
    vmt_sources: dict[Region, VmtSource] = Field(default_factory=default_vmt_sources)
    urban_vmt_ratio: float = Field(
        default=0.9,
        gt=0.0,
        description="Urbanized-area VMT per vehicle relative to the state figure",
    )
    coverage_lambdas: list[float] = Field(default_factory=lambda: [0.5, 1.0, 3.0, 10.0, 50.0])

    @model_validator(mode="after")
    def check_unique(self) -> "SimConfig":
        names = [r.name for r in self.regions]
        if len(names) != len(set(names)):
            raise ValueError("regions must be unique")
        modes = [f.mode for f in self.fleet]
        if len(modes) != len(set(modes)):
            raise ValueError("fleet modes must be unique")
        unknown = sorted({r.value for f in self.fleet for r in f.miles} - {n.value for n in names})
        if unknown:
            raise ValueError(f"fleet miles for unconfigured regions {unknown}")
        missing_sources = sorted(n.value for n in names if n not in self.vmt_sources)
        if missing_sources:
            raise ValueError(f"no VMT source names for {missing_sources}")
        if any(lam < 0 for lam in self.coverage_lambdas):
            raise ValueError("coverage_lambdas must be non-negative")
        return self

    def region(self, name: Region) -> SimRegion:
        return next(r for r in self.regions if r.name is name)

    @classmethod
    def from_file(cls, path: Path) -> "SimConfig":
        """
        Load a simconfig JSON document.

        Raises:
            ConfigurationError: Missing file, bad JSON or invalid values
        """
        path = Path(path)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise ConfigurationError(f"Simulation config not found: {path}") from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path.name} is not valid JSON: {e}") from e
        try:
            return cls.model_validate(payload)
        except ValidationError as e:
            raise ConfigurationError(
                f"Invalid simulation config {path.name}",
                details={"errors": [err["msg"] for err in e.errors()]},
            ) from e
