"""Mileage- and zip-code-calibrated human-driver baselines."""

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

import structlog

from src.core.domain import CATEGORY_ORDER, COVERAGE_ORDER, Coverage, MileageCategory, Region
from src.core.exceptions import (
    MissingRegionError,
    MissingVmtYearError,
    ZeroExposureError,
    ZeroMileageError,
)
from src.ingestion.models import ClaimRecord, ExposureRecord, MileageLog, ZipCodeSet
from src.ingestion.modes import filter_claims_by_zip, filter_exposure_by_zip
from src.stats.intervals import RateEstimate, check_weights, mixture_standard_error, normal_rate_ci
from src.vmt.estimator import VmtEstimate

logger = structlog.get_logger()

MILES_PER_MMI = 1e6

BaselineKey = tuple[MileageCategory, Coverage]


@dataclass(frozen=True)
class RegionFrequency:
    """Claim frequency of the human population of one region for one coverage."""

    region: Region
    coverage: Coverage
    claim_count: int
    exposure_mmi: float

    @property
    def frequency_cpmm(self) -> float:
        return self.claim_count / self.exposure_mmi


@dataclass(frozen=True)
class MileageMix:
    """Fleet share of miles per region for one reporting category."""

    category: MileageCategory
    weights: Mapping[Region, float]

    def __post_init__(self) -> None:
        check_weights(list(self.weights.values()))
        object.__setattr__(self, "weights", MappingProxyType(dict(self.weights)))

    @property
    def active_regions(self) -> list[Region]:
        """Regions with positive weight, in enum order."""
        return [r for r in Region if self.weights.get(r, 0.0) > 0.0]


@dataclass(frozen=True)
class BaselineResult:
    """Mixed baseline for one category and coverage."""

    category: MileageCategory
    coverage: Coverage
    estimate: RateEstimate
    mix: MileageMix | None = None
    per_region: tuple[RegionFrequency, ...] = field(default=())

    @property
    def claim_count_total(self) -> int | None:
        if not self.per_region:
            return None
        return sum(r.claim_count for r in self.per_region)

    @property
    def exposure_mmi_total(self) -> float | None:
        if not self.per_region:
            return None
        return math.fsum(r.exposure_mmi for r in self.per_region)


def exposure_miles(policy_years: float, vmt_selected: float) -> float:
    """Convert earned policy-years into miles."""
    if vmt_selected <= 0:
        raise ValueError(f"VMT per vehicle must be positive, got {vmt_selected}")
    return policy_years * vmt_selected


def region_frequency(
    region: Region,
    coverage: Coverage,
    claims: Iterable[ClaimRecord],
    exposure: Sequence[ExposureRecord],
    vmt: Mapping[tuple[Region, int], VmtEstimate],
) -> RegionFrequency:
    """
    Frequency of one region's human population, exposure converted year by year.

    Args:
        region: Region being measured
        coverage: Coverage being measured
        claims: Zip-filtered human claims; only countable ones of this region and coverage count
        exposure: Zip-filtered exposure rows of this region
        vmt: Selected VMT per vehicle by (region, year)

    Raises:
        MissingVmtYearError: An exposure year has no VMT estimate
        ZeroExposureError: No exposure, or all of it zero
    """
    rows = [e for e in exposure if e.region is region]
    if not rows:
        raise ZeroExposureError(
            f"No exposure for {region.value}",
            details={"region": region.value, "coverage": coverage.value},
        )

    policy_years_by_year: dict[int, float] = defaultdict(float)
    for row in rows:
        policy_years_by_year[row.coverage_year] += row.policy_years

    miles = []
    for year, policy_years in sorted(policy_years_by_year.items()):
        estimate = vmt.get((region, year))
        if estimate is None:
            raise MissingVmtYearError(
                f"No VMT estimate for {region.value} {year}",
                region=region.value,
                year=year,
                details={"region": region.value, "year": year},
            )
        miles.append(exposure_miles(policy_years, estimate.selected))

    exposure_mmi = math.fsum(miles) / MILES_PER_MMI
    if exposure_mmi <= 0:
        raise ZeroExposureError(
            f"Exposure for {region.value} sums to zero",
            details={"region": region.value, "coverage": coverage.value},
        )

    claim_count = sum(
        1 for c in claims if c.region is region and c.coverage is coverage and c.countable
    )
    return RegionFrequency(region=region, coverage=coverage, claim_count=claim_count, exposure_mmi=exposure_mmi)


def mileage_mix(mileage: Iterable[MileageLog], category: MileageCategory) -> MileageMix:
    """Regional shares of the category's miles; TO+RO uses combined miles."""
    miles_by_region: dict[Region, float] = defaultdict(float)
    for log in mileage:
        if log.mode in category.modes:
            miles_by_region[log.region] += log.miles

    total = math.fsum(miles_by_region.values())
    if total <= 0:
        raise ZeroMileageError(
            f"No fleet miles for {category.value}",
            details={"category": category.value},
        )
    return MileageMix(
        category=category,
        weights={region: miles / total for region, miles in sorted(miles_by_region.items(), key=lambda i: i[0].value)},
    )


def mix_baseline(
    per_region: Mapping[Region, RegionFrequency],
    mix: MileageMix,
    confidence: float = 0.95,
) -> BaselineResult:
    """
    Weight regional frequencies by the fleet's mileage distribution.

    Point estimate is sum(w_r * f_r); the interval is a normal approximation
    with the mixture standard error.

    Raises:
        MissingRegionError: A region with positive weight has no frequency
        WeightSumInvalidError: Weights do not sum to one
    """
    regions = mix.active_regions
    missing = [r.value for r in regions if r not in per_region]
    if missing:
        raise MissingRegionError(
            f"No baseline frequency for weighted regions {missing}",
            details={"category": mix.category.value, "missing": missing},
        )
    coverages = {per_region[r].coverage for r in regions}
    if len(coverages) != 1:
        raise ValueError("regional frequencies mix coverages")

    weights = [mix.weights[r] for r in regions]
    frequencies = [per_region[r].frequency_cpmm for r in regions]
    exposures = [per_region[r].exposure_mmi for r in regions]
    rate = math.fsum(w * f for w, f in zip(weights, frequencies))
    se = mixture_standard_error(weights, frequencies, exposures)
    estimate = normal_rate_ci(rate, se, confidence)

    coverage = coverages.pop()
    logger.debug(
        "baseline_mixed",
        category=mix.category.value,
        coverage=coverage.value,
        rate=rate,
        standard_error=se,
    )
    return BaselineResult(
        category=mix.category,
        coverage=coverage,
        estimate=estimate,
        mix=mix,
        per_region=tuple(per_region[r] for r in regions),
    )


class BaselineBuilder:
    """Computes every category x coverage baseline from loaded inputs."""

    def __init__(self, confidence: float = 0.95, strict: bool = False) -> None:
        self._confidence = confidence
        self._strict = strict
        self._log = logger.bind(component="baseline_builder")

    def regional_frequencies(
        self,
        human_claims: Sequence[ClaimRecord],
        exposure: Sequence[ExposureRecord],
        zips: Mapping[Region, ZipCodeSet],
        vmt: Mapping[tuple[Region, int], VmtEstimate],
    ) -> dict[Coverage, dict[Region, RegionFrequency]]:
        """Zip-calibrated frequencies per coverage and region."""
        claims = filter_claims_by_zip([c for c in human_claims if not c.is_fleet], zips)
        rows = filter_exposure_by_zip(exposure, zips)
        regions = sorted({r.region for r in rows}, key=lambda r: r.value)
        self._log.info(
            "zip_calibration",
            claims_kept=len(claims),
            claims_total=len(human_claims),
            exposure_rows_kept=len(rows),
            exposure_rows_total=len(exposure),
        )
        return {
            coverage: {region: region_frequency(region, coverage, claims, rows, vmt) for region in regions}
            for coverage in COVERAGE_ORDER
        }

    def build(
        self,
        human_claims: Sequence[ClaimRecord],
        exposure: Sequence[ExposureRecord],
        zips: Mapping[Region, ZipCodeSet],
        vmt: Mapping[tuple[Region, int], VmtEstimate],
        mileage: Sequence[MileageLog],
    ) -> dict[BaselineKey, BaselineResult]:
        """
        Baselines for all categories with fleet miles.

        In strict mode a category without miles raises ZeroMileageError;
        otherwise it is left out.
        """
        frequencies = self.regional_frequencies(human_claims, exposure, zips, vmt)
        results: dict[BaselineKey, BaselineResult] = {}
        for category in CATEGORY_ORDER:
            try:
                mix = mileage_mix(mileage, category)
            except ZeroMileageError:
                if self._strict:
                    raise
                self._log.warning("baseline_skipped", category=category.value, reason="no fleet miles")
                continue
            for coverage in COVERAGE_ORDER:
                results[(category, coverage)] = mix_baseline(frequencies[coverage], mix, self._confidence)

        self._log.info("baselines_built", cells=len(results))
        return results


def build_baselines(
    human_claims: Sequence[ClaimRecord],
    exposure: Sequence[ExposureRecord],
    zips: Mapping[Region, ZipCodeSet],
    vmt: Mapping[tuple[Region, int], VmtEstimate],
    mileage: Sequence[MileageLog],
    confidence: float = 0.95,
    strict: bool = False,
) -> dict[BaselineKey, BaselineResult]:
    """Functional entry point for :class:`BaselineBuilder`."""
    return BaselineBuilder(confidence, strict).build(human_claims, exposure, zips, vmt, mileage)
