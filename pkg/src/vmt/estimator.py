"""Annual miles-per-vehicle estimates from aggregate VMT statistics."""

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
import structlog

from src.core.config import VmtSource
from src.core.domain import Region, VmtSelection
from src.core.exceptions import MissingVmtYearError, VmtInputError
from src.core.tables import write_table
from src.ingestion.models import VmtInputRow, VmtScope

logger = structlog.get_logger()

MONTHS = frozenset(range(1, 13))


@dataclass(frozen=True)
class AnnualVmt:
    """One annual aggregate per scope, region name and year."""

    scope: VmtScope
    region_name: str
    year: int
    total_vmt_miles: float
    registered_vehicles: float | None = None
    population: float | None = None
    vehicles_per_capita: float | None = None


@dataclass(frozen=True)
class VmtEstimate:
    """Both per-vehicle estimates for a region-year and the value selected."""

    region: Region
    year: int
    miles_per_vehicle_state: float
    miles_per_vehicle_urban: float
    selected: float
    selection: VmtSelection


def vmt_per_vehicle_state(total_vmt_miles: float, registered_vehicles: float) -> float:
    """Annual state VMT divided by registered vehicles."""
    if registered_vehicles <= 0:
        raise ZeroDivisionError("registered_vehicles must be positive")
    if total_vmt_miles <= 0:
        raise ValueError("total_vmt_miles must be positive")
    return total_vmt_miles / registered_vehicles


def vmt_per_vehicle_urban(total_vmt_miles: float, population: float, vehicles_per_capita: float) -> float:
    """Annual urbanized-area VMT divided by population x vehicles per capita."""
    vehicles = population * vehicles_per_capita
    if vehicles <= 0:
        raise ZeroDivisionError("population and vehicles_per_capita must be positive")
    if total_vmt_miles <= 0:
        raise ValueError("total_vmt_miles must be positive")
    return total_vmt_miles / vehicles


def select_conservative(state_est: float, urban_est: float) -> float:
    """
    The estimate giving the lower baseline frequency.

    Frequency = claims / (policy_years x VMT per vehicle) falls as VMT per
    vehicle rises, so the larger miles-per-vehicle value is the conservative one.
    """
    if state_est <= 0 or urban_est <= 0:
        raise ValueError("VMT estimates must be positive")
    return max(state_est, urban_est)


def aggregate_vmt_rows(rows: Iterable[VmtInputRow]) -> dict[tuple[VmtScope, str, int], AnnualVmt]:
    """
    Collapse input rows to one annual figure per scope, name and year.

    Monthly State rows are summed; a year must have all twelve months, no
    duplicates, one vehicle count, and must not mix monthly and annual rows.
    """
    grouped: dict[tuple[VmtScope, str, int], list[VmtInputRow]] = defaultdict(list)
    for row in rows:
        grouped[(row.region_scope, row.region_name, row.year)].append(row)

    annual: dict[tuple[VmtScope, str, int], AnnualVmt] = {}
    for key, group in grouped.items():
        scope, name, year = key
        monthly = [r for r in group if r.month is not None]
        yearly = [r for r in group if r.month is None]
        where = {"scope": scope.value, "region_name": name, "year": year}

        if monthly and yearly:
            raise VmtInputError("Monthly and annual rows mixed for one year", details=where)
        if len(yearly) > 1:
            raise VmtInputError("Duplicate annual rows", details=where)

        if yearly:
            row = yearly[0]
            annual[key] = AnnualVmt(
                scope=scope,
                region_name=name,
                year=year,
                total_vmt_miles=row.total_vmt_miles,
                registered_vehicles=row.registered_vehicles,
                population=row.population,
                vehicles_per_capita=row.vehicles_per_capita,
            )
            continue

        months = [r.month for r in monthly]
        if len(months) != len(set(months)) or set(months) != MONTHS:
            missing = sorted(MONTHS - set(months))
            raise VmtInputError(
                f"Monthly rows for {name} {year} must cover all 12 months exactly once",
                details={**where, "missing_months": missing},
            )
        vehicles = {r.registered_vehicles for r in monthly}
        if len(vehicles) != 1:
            raise VmtInputError("Monthly rows disagree on registered_vehicles", details=where)

        annual[key] = AnnualVmt(
            scope=scope,
            region_name=name,
            year=year,
            total_vmt_miles=math.fsum(r.total_vmt_miles for r in monthly),
            registered_vehicles=vehicles.pop(),
        )
    return annual


class VmtEstimator:
    """Builds per region-year VMT estimates and applies the selection rule."""

    def __init__(
        self,
        sources: Mapping[Region, VmtSource],
        selection: VmtSelection = VmtSelection.AUTO,
    ) -> None:
        self._sources = sources
        self._selection = selection
        self._log = logger.bind(component="vmt_estimator", selection=selection.value)

    def estimate(
        self,
        rows: Sequence[VmtInputRow],
        years_by_region: Mapping[Region, Iterable[int]],
    ) -> dict[tuple[Region, int], VmtEstimate]:
        """
        Estimate miles per vehicle for every requested region-year.

        Raises:
            MissingVmtYearError: A requested year has no state or urban figure
            VmtInputError: Monthly rows are incomplete or inconsistent
        """
        annual = aggregate_vmt_rows(rows)
        estimates: dict[tuple[Region, int], VmtEstimate] = {}
        for region in sorted(years_by_region, key=lambda r: r.value):
            source = self._sources.get(region)
            if source is None:
                raise VmtInputError(
                    f"No VMT source names configured for {region.value}",
                    details={"region": region.value},
                )
            for year in sorted(set(years_by_region[region])):
                state = self._lookup(annual, region, VmtScope.STATE, source.state, year)
                urban = self._lookup(annual, region, VmtScope.URBANIZED_AREA, source.urbanized_area, year)

                state_est = vmt_per_vehicle_state(state.total_vmt_miles, state.registered_vehicles or 0.0)
                urban_est = vmt_per_vehicle_urban(
                    urban.total_vmt_miles,
                    urban.population or 0.0,
                    urban.vehicles_per_capita or 0.0,
                )
                estimates[(region, year)] = VmtEstimate(
                    region=region,
                    year=year,
                    miles_per_vehicle_state=state_est,
                    miles_per_vehicle_urban=urban_est,
                    selected=self._select(state_est, urban_est),
                    selection=self._selection,
                )
                self._log.debug(
                    "vmt_year_estimated",
                    region=region.value,
                    year=year,
                    state=state_est,
                    urban=urban_est,
                )
        self._log.info("vmt_estimated", region_years=len(estimates))
        return estimates

    def _select(self, state_est: float, urban_est: float) -> float:
        if self._selection is VmtSelection.STATE:
            return state_est
        if self._selection is VmtSelection.URBAN:
            return urban_est
        return select_conservative(state_est, urban_est)

    @staticmethod
    def _lookup(
        annual: Mapping[tuple[VmtScope, str, int], AnnualVmt],
        region: Region,
        scope: VmtScope,
        name: str,
        year: int,
    ) -> AnnualVmt:
        found = annual.get((scope, name, year))
        if found is None:
            raise MissingVmtYearError(
                f"No {scope.value} VMT for {name} in {year}",
                region=region.value,
                year=year,
                scope=scope.value,
                details={"region": region.value, "year": year, "scope": scope.value, "region_name": name},
            )
        return found


def estimate_vmt(
    rows: Sequence[VmtInputRow],
    years_by_region: Mapping[Region, Iterable[int]],
    sources: Mapping[Region, VmtSource],
    selection: VmtSelection = VmtSelection.AUTO,
) -> dict[tuple[Region, int], VmtEstimate]:
    """Functional entry point for :class:`VmtEstimator`."""
    return VmtEstimator(sources, selection).estimate(rows, years_by_region)


VMT_COLUMNS = (
    "region",
    "year",
    "miles_per_vehicle_state",
    "miles_per_vehicle_urban",
    "selected",
    "selection",
)


def vmt_frame(estimates: Mapping[tuple[Region, int], VmtEstimate]) -> pd.DataFrame:
    """Estimates as a table in region, year order."""
    rows = [
        [
            e.region.value,
            e.year,
            repr(e.miles_per_vehicle_state),
            repr(e.miles_per_vehicle_urban),
            repr(e.selected),
            e.selection.value,
        ]
        for _, e in sorted(estimates.items(), key=lambda item: (item[0][0].value, item[0][1]))
    ]
    return pd.DataFrame(rows, columns=list(VMT_COLUMNS))


def write_vmt_csv(
    estimates: Mapping[tuple[Region, int], VmtEstimate],
    path: Path,
    header_lines: Sequence[str] = (),
) -> Path:
    """Write `vmt.csv` with optional ``#`` provenance lines on top."""
    return write_table(vmt_frame(estimates), path, header_lines)

