"""Input record schemas."""

from dataclasses import dataclass
from datetime import date, datetime, timedelta
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from src.core.domain import ClaimSource, Coverage, DrivingMode, Region
from src.core.exceptions import InvalidTraceError

ZIP_PATTERN = r"^[0-9]{5}$"


@dataclass(frozen=True)
class StudyWindows:
    """Inclusive date ranges that claims must fall into, per source."""

    human_start: date = date(2016, 1, 1)
    human_end: date = date(2021, 12, 31)
    fleet_start: date = date(2018, 1, 1)
    fleet_end: date = date(2023, 8, 1)

    def bounds(self, source: ClaimSource) -> tuple[date, date]:
        if source is ClaimSource.FLEET:
            return self.fleet_start, self.fleet_end
        return self.human_start, self.human_end

    @property
    def human_years(self) -> range:
        return range(self.human_start.year, self.human_end.year + 1)


DEFAULT_WINDOWS = StudyWindows()


def _windows(info: ValidationInfo) -> StudyWindows:
    if isinstance(info.context, dict) and isinstance(info.context.get("windows"), StudyWindows):
        return info.context["windows"]
    return DEFAULT_WINDOWS


class ClaimRecord(BaseModel):
    """One third-party liability claim."""

    model_config = ConfigDict(frozen=True)

    claim_id: str = Field(min_length=1)
    source: ClaimSource
    coverage: Coverage
    occurrence_date: date
    zip_code: str = Field(pattern=ZIP_PATTERN)
    region: Region
    liability_payment_expected: bool
    mode: DrivingMode | None = Field(default=None, validate_default=True)
    mode_override: DrivingMode | None = None

    @field_validator("occurrence_date")
    @classmethod
    def within_study_window(cls, v: date, info: ValidationInfo) -> date:
        source = info.data.get("source")
        if source is None:
            return v
        start, end = _windows(info).bounds(source)
        if not start <= v <= end:
            raise ValueError(f"{v.isoformat()} outside {source.value} window {start}..{end}")
        return v

    @field_validator("mode")
    @classmethod
    def fleet_needs_mode(cls, v: DrivingMode | None, info: ValidationInfo) -> DrivingMode | None:
        source = info.data.get("source")
        if source is ClaimSource.FLEET and v is None:
            raise ValueError("fleet claims need a driving mode")
        if source is ClaimSource.HUMAN_BASELINE and v is not None:
            raise ValueError("human baseline claims carry no driving mode")
        return v

    @field_validator("mode_override")
    @classmethod
    def override_only_on_fleet(cls, v: DrivingMode | None, info: ValidationInfo) -> DrivingMode | None:
        if v is not None and info.data.get("source") is ClaimSource.HUMAN_BASELINE:
            raise ValueError("human baseline claims take no mode override")
        return v

    @property
    def is_fleet(self) -> bool:
        return self.source is ClaimSource.FLEET

    @property
    def countable(self) -> bool:
        """Claims not expected to resolve with a liability payment are excluded from frequencies."""
        return self.liability_payment_expected

    @property
    def effective_mode(self) -> DrivingMode | None:
        """Curated override wins over the stored mode."""
        return self.mode_override or self.mode


class ExposureRecord(BaseModel):
    """Earned policy-years of the human population for one zip code and year."""

    model_config = ConfigDict(frozen=True)

    region: Region
    zip_code: str = Field(pattern=ZIP_PATTERN)
    coverage_year: int
    policy_years: float = Field(ge=0.0)

    @field_validator("coverage_year")
    @classmethod
    def within_coverage_years(cls, v: int, info: ValidationInfo) -> int:
        years = _windows(info).human_years
        if v not in years:
            raise ValueError(f"coverage year {v} outside {years.start}..{years.stop - 1}")
        return v


class MileageLog(BaseModel):
    """Fleet miles for one driving mode in one region."""

    model_config = ConfigDict(frozen=True)

    region: Region
    mode: DrivingMode
    miles: float = Field(ge=0.0)


class ZipRow(BaseModel):
    """One operating zip code of a region."""

    model_config = ConfigDict(frozen=True)

    region: Region
    zip_code: str = Field(pattern=ZIP_PATTERN)


@dataclass(frozen=True)
class ZipCodeSet:
    """Operating zip codes of one region."""

    region: Region
    zip_codes: frozenset[str]

    def __post_init__(self) -> None:
        if not self.zip_codes:
            raise ValueError(f"zip code set for {self.region.value} is empty")

    def __contains__(self, zip_code: object) -> bool:
        return zip_code in self.zip_codes


class VmtScope(str, Enum):
    """Geographic scope of an aggregate VMT statistic."""

    STATE = "State"
    URBANIZED_AREA = "UrbanizedArea"


class VmtInputRow(BaseModel):
    """Aggregate VMT statistic for a state (monthly or annual) or an urbanized area (annual)."""

    model_config = ConfigDict(frozen=True)

    region_scope: VmtScope
    region_name: str = Field(min_length=1)
    year: int
    month: int | None = Field(default=None, ge=1, le=12)
    total_vmt_miles: float = Field(gt=0.0)
    registered_vehicles: float | None = Field(default=None, gt=0.0)
    population: float | None = Field(default=None, gt=0.0)
    vehicles_per_capita: float | None = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def fields_match_scope(self) -> "VmtInputRow":
        if self.region_scope is VmtScope.STATE:
            if self.registered_vehicles is None:
                raise ValueError("State rows need registered_vehicles")
            if self.population is not None or self.vehicles_per_capita is not None:
                raise ValueError("State rows take no population or vehicles_per_capita")
        else:
            if self.population is None or self.vehicles_per_capita is None:
                raise ValueError("UrbanizedArea rows need population and vehicles_per_capita")
            if self.registered_vehicles is not None:
                raise ValueError("UrbanizedArea rows take no registered_vehicles")
            if self.month is not None:
                raise ValueError("UrbanizedArea rows are annual; leave month blank")
        return self


class EngagementTrace(BaseModel):
    """ADS engagement intervals around one fleet collision."""

    model_config = ConfigDict(frozen=True)

    claim_id: str | None = None
    intervals: tuple[tuple[datetime, datetime], ...] = ()
    human_in_driver_seat: bool
    impact_time: datetime

    @model_validator(mode="after")
    def one_clock(self) -> "EngagementTrace":
        stamps = [self.impact_time, *(t for interval in self.intervals for t in interval)]
        aware = {t.utcoffset() is not None for t in stamps}
        if len(aware) > 1:
            raise InvalidTraceError(
                "Trace mixes timestamps with and without a UTC offset",
                details={"claim_id": self.claim_id},
            )
        return self

    def check(self) -> None:
        """Intervals must be well-formed, sorted and non-overlapping."""
        previous_end: datetime | None = None
        for index, (start, end) in enumerate(self.intervals):
            if end < start:
                raise InvalidTraceError(
                    "Engagement interval ends before it starts",
                    details={"claim_id": self.claim_id, "interval": index},
                )
            if previous_end is not None and start < previous_end:
                raise InvalidTraceError(
                    "Engagement intervals overlap or are unsorted",
                    details={"claim_id": self.claim_id, "interval": index},
                )
            previous_end = end

    def shifted(self, offset: timedelta) -> "EngagementTrace":
        """Same trace with every timestamp moved by ``offset``."""
        return self.model_copy(
            update={
                "intervals": tuple((s + offset, e + offset) for s, e in self.intervals),
                "impact_time": self.impact_time + offset,
            }
        )

