"""Synthetic input datasets drawn from known Poisson claim processes."""

from datetime import date, timedelta
from pathlib import Path
from typing import Any

import numpy as np
import structlog

from src.core.domain import ClaimSource, Coverage, MileageCategory, Region
from src.core.exceptions import ConfigurationError
from src.ingestion.models import (
    DEFAULT_WINDOWS,
    ClaimRecord,
    ExposureRecord,
    MileageLog,
    StudyWindows,
    VmtInputRow,
    VmtScope,
    ZipRow,
)
from src.ingestion.parser import TableSchema, write_dataset
from src.simulator.config import MILES_PER_MMI, SimConfig
from src.simulator.sampling import draw_poisson_counts

logger = structlog.get_logger()

# State rows: vehicles chosen so a monthly total is exactly vmt x 1e5.
STATE_REGISTERED_VEHICLES = 1_200_000
URBAN_POPULATION = 1_000_000
URBAN_VEHICLES_PER_CAPITA = 1.0


class DatasetSimulator:
    """Writes the five input tables for a :class:`SimConfig`."""

    def __init__(self, config: SimConfig, windows: StudyWindows = DEFAULT_WINDOWS) -> None:
        self.config = config
        self.windows = windows
        self._rng = np.random.default_rng(config.seed)
        self._context = {"windows": windows}
        self._log = logger.bind(component="dataset_simulator", seed=config.seed)

    def _check_years(self) -> None:
        years = self.windows.human_years
        for region in self.config.regions:
            outside = sorted(y for y in region.policy_years_by_year() if y not in years)
            if outside:
                raise ConfigurationError(
                    f"Simulated exposure years {outside} for {region.name.value} fall outside the human window",
                    details={"region": region.name.value, "years": outside},
                )

    def _dates(self, start: date, end: date, size: int) -> list[date]:
        offsets = self._rng.integers(0, (end - start).days + 1, size=size)
        return [start + timedelta(days=int(d)) for d in offsets]

    def _zips(self, region: Region, size: int) -> list[str]:
        codes = self.config.region(region).zip_codes
        return [codes[int(i)] for i in self._rng.integers(0, len(codes), size=size)]

    def _draw(self, rate: float, exposure_mmi: float) -> int:
        return int(draw_poisson_counts(rate, exposure_mmi, 1, self._rng)[0])

    def _claim(self, claim_id: str, **fields: Any) -> ClaimRecord:
        return ClaimRecord.model_validate(
            {"claim_id": claim_id, "liability_payment_expected": True, **fields},
            context=self._context,
        )

    def human_claims(self) -> list[ClaimRecord]:
        claims: list[ClaimRecord] = []
        for region in self.config.regions:
            for coverage in Coverage:
                rate = region.true_rate_cpmm.get(coverage, 0.0)
                for year, exposure in region.exposure_by_year().items():
                    k = self._draw(rate, exposure)
                    start = max(date(year, 1, 1), self.windows.human_start)
                    end = min(date(year, 12, 31), self.windows.human_end)
                    for day, zip_code in zip(self._dates(start, end, k), self._zips(region.name, k)):
                        claims.append(
                            self._claim(
                                f"H{len(claims) + 1:07d}",
                                source=ClaimSource.HUMAN_BASELINE,
                                coverage=coverage,
                                occurrence_date=day,
                                zip_code=zip_code,
                                region=region.name,
                            )
                        )
        return claims

    def fleet_claims(self) -> list[ClaimRecord]:
        claims: list[ClaimRecord] = []
        for fleet in self.config.fleet:
            for region, miles in sorted(fleet.miles.items(), key=lambda i: i[0].value):
                for coverage in Coverage:
                    k = self._draw(fleet.true_rate_cpmm.get(coverage, 0.0), miles / MILES_PER_MMI)
                    days = self._dates(self.windows.fleet_start, self.windows.fleet_end, k)
                    for day, zip_code in zip(days, self._zips(region, k)):
                        claims.append(
                            self._claim(
                                f"F{len(claims) + 1:07d}",
                                source=ClaimSource.FLEET,
                                coverage=coverage,
                                occurrence_date=day,
                                zip_code=zip_code,
                                region=region,
                                mode=fleet.mode,
                            )
                        )
        return claims

    def exposure(self) -> list[ExposureRecord]:
        rows = []
        for region in self.config.regions:
            share = 1.0 / len(region.zip_codes)
            for year, policy_years in region.policy_years_by_year().items():
                for zip_code in region.zip_codes:
                    rows.append(
                        ExposureRecord.model_validate(
                            {
                                "region": region.name,
                                "zip_code": zip_code,
                                "coverage_year": year,
                                "policy_years": policy_years * share,
                            },
                            context=self._context,
                        )
                    )
        return rows

    def mileage(self) -> list[MileageLog]:
        return [
            MileageLog(region=region, mode=fleet.mode, miles=miles)
            for fleet in self.config.fleet
            for region, miles in sorted(fleet.miles.items(), key=lambda i: i[0].value)
        ]

    def zips(self) -> list[ZipRow]:
        return [ZipRow(region=r.name, zip_code=z) for r in self.config.regions for z in r.zip_codes]

    def vmt_inputs(self) -> list[VmtInputRow]:
        """Twelve monthly State rows and one annual UrbanizedArea row per region-year."""
        rows = []
        for region in self.config.regions:
            source = self.config.vmt_sources[region.name]
            for year, vmt in sorted(region.vmt_per_vehicle.items()):
                monthly_total = vmt * STATE_REGISTERED_VEHICLES / 12
                rows.extend(
                    VmtInputRow(
                        region_scope=VmtScope.STATE,
                        region_name=source.state,
                        year=year,
                        month=month,
                        total_vmt_miles=monthly_total,
                        registered_vehicles=STATE_REGISTERED_VEHICLES,
                    )
                    for month in range(1, 13)
                )
                rows.append(
                    VmtInputRow(
                        region_scope=VmtScope.URBANIZED_AREA,
                        region_name=source.urbanized_area,
                        year=year,
                        total_vmt_miles=vmt * self.config.urban_vmt_ratio * URBAN_POPULATION * URBAN_VEHICLES_PER_CAPITA,
                        population=URBAN_POPULATION,
                        vehicles_per_capita=URBAN_VEHICLES_PER_CAPITA,
                    )
                )
        return rows

    def write(self, out_dir: Path) -> dict[TableSchema, Path]:
        """Draw every table and write it as `<table>.csv` under ``out_dir``."""
        self._check_years()
        out_dir = Path(out_dir)
        claims = self.human_claims() + self.fleet_claims()
        tables = {
            TableSchema.CLAIMS: claims,
            TableSchema.EXPOSURE: self.exposure(),
            TableSchema.MILEAGE: self.mileage(),
            TableSchema.ZIPS: self.zips(),
            TableSchema.VMT_INPUTS: self.vmt_inputs(),
        }
        paths = {schema: write_dataset(schema, records, out_dir / f"{schema.value}.csv") for schema, records in tables.items()}
        self._log.info(
            "dataset_simulated",
            out_dir=str(out_dir),
            human_claims=sum(1 for c in claims if not c.is_fleet),
            fleet_claims=sum(1 for c in claims if c.is_fleet),
        )
        return paths


def simulate_claims(
    config: SimConfig,
    out_dir: Path,
    windows: StudyWindows = DEFAULT_WINDOWS,
) -> dict[TableSchema, Path]:
    """Generate a synthetic dataset; a fixed seed gives identical files."""
    return DatasetSimulator(config, windows).write(out_dir)


def true_mixed_rate(config: SimConfig, category: MileageCategory, coverage: Coverage) -> float:
    """Sum of w_r x true_rate_r with weights from the configured fleet miles."""
    miles: dict[Region, float] = {}
    for fleet in config.fleet:
        if fleet.mode in category.modes:
            for region, m in fleet.miles.items():
                miles[region] = miles.get(region, 0.0) + m
    total = sum(miles.values())
    if total <= 0:
        raise ValueError(f"no simulated fleet miles for {category.value}")
    return sum(m / total * config.region(r).true_rate_cpmm.get(coverage, 0.0) for r, m in miles.items())
