"""Fleet rates against human baselines, cell by cell."""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import structlog

from src.baseline.builder import BaselineKey, BaselineResult
from src.core.domain import CATEGORY_ORDER, COVERAGE_ORDER, Coverage, MileageCategory
from src.core.exceptions import ClaimsBenchError, InvariantError, MatrixCellError, ZeroMileageError
from src.ingestion.models import ClaimRecord, MileageLog
from src.stats.intervals import (
    RateEstimate,
    SignificanceVerdict,
    percent_reduction,
    poisson_exact_rate_ci,
    significance,
)
from src.stats.rounding import round_half_up

logger = structlog.get_logger()

MILES_PER_MMI = 1e6


@dataclass(frozen=True)
class ComparisonResult:
    """One category x coverage cell of the comparison matrix."""

    category: MileageCategory
    coverage: Coverage
    fleet: RateEstimate
    baseline: RateEstimate
    reduction_percent_unrounded: float
    verdict: SignificanceVerdict
    non_payment_claims: int = 0

    def __post_init__(self) -> None:
        if self.fleet.claim_count is None or self.fleet.exposure_mmi is None:
            raise ValueError("fleet estimate needs claim_count and exposure_mmi")

    @property
    def reduction_percent(self) -> int:
        """Display value, rounded half-up."""
        return int(round_half_up(self.reduction_percent_unrounded, 0))


@dataclass(frozen=True)
class MissingCell:
    """A cell left empty on a partial dataset."""

    category: MileageCategory
    coverage: Coverage
    reason: str


MatrixCell = ComparisonResult | MissingCell


def category_miles(mileage: Iterable[MileageLog], category: MileageCategory) -> float:
    return sum(log.miles for log in mileage if log.mode in category.modes)


def _in_cell(claim: ClaimRecord, category: MileageCategory, coverage: Coverage) -> bool:
    return claim.is_fleet and claim.coverage is coverage and claim.effective_mode in category.modes


def fleet_cell(
    claims: Sequence[ClaimRecord],
    mileage: Sequence[MileageLog],
    category: MileageCategory,
    coverage: Coverage,
    confidence: float = 0.95,
) -> RateEstimate:
    """
    Exact-interval fleet rate for one cell.

    Counts countable fleet claims whose effective mode belongs to the category;
    exposure is the category's miles in millions.

    Raises:
        ZeroMileageError: The category has no miles
    """
    miles = category_miles(mileage, category)
    if miles <= 0:
        raise ZeroMileageError(
            f"No fleet miles for {category.value}",
            details={"category": category.value, "coverage": coverage.value},
        )
    claim_count = sum(1 for c in claims if _in_cell(c, category, coverage) and c.countable)
    return poisson_exact_rate_ci(claim_count, miles / MILES_PER_MMI, confidence)


def compare_cell(
    category: MileageCategory,
    coverage: Coverage,
    fleet: RateEstimate,
    baseline: RateEstimate,
    non_payment_claims: int = 0,
) -> ComparisonResult:
    """Percent reduction on unrounded rates plus the CI-overlap verdict."""
    verdict = significance(fleet, baseline)
    reduction = percent_reduction(fleet.rate_cpmm, baseline.rate_cpmm)
    logger.debug(
        "cell_compared",
        category=category.value,
        coverage=coverage.value,
        fleet_rate=fleet.rate_cpmm,
        baseline_rate=baseline.rate_cpmm,
        reduction=reduction,
        verdict=verdict.value,
    )
    return ComparisonResult(
        category=category,
        coverage=coverage,
        fleet=fleet,
        baseline=baseline,
        reduction_percent_unrounded=reduction,
        verdict=verdict,
        non_payment_claims=non_payment_claims,
    )


class ComparisonMatrix:
    """Builds all eight cells from fleet inputs and a set of baselines."""

    def __init__(self, confidence: float = 0.95, strict: bool = False) -> None:
        self._confidence = confidence
        self._strict = strict
        self._log = logger.bind(component="comparison_matrix")

    def build(
        self,
        fleet_claims: Sequence[ClaimRecord],
        mileage: Sequence[MileageLog],
        baselines: Mapping[BaselineKey, BaselineResult],
    ) -> list[MatrixCell]:
        """
        Cells in category-major, coverage-minor order.

        Raises:
            MatrixCellError: A cell failed; carries the cell and the cause
        """
        cells: list[MatrixCell] = []
        for category in CATEGORY_ORDER:
            for coverage in COVERAGE_ORDER:
                try:
                    cells.append(self._cell(fleet_claims, mileage, baselines, category, coverage))
                except ClaimsBenchError as e:
                    raise MatrixCellError(
                        f"{category.value}/{coverage.value}: {e.message}",
                        category=category.value,
                        coverage=coverage.value,
                        cause=e,
                    ) from e

        compared = sum(1 for c in cells if isinstance(c, ComparisonResult))
        self._log.info("matrix_built", compared=compared, missing=len(cells) - compared)
        return cells

    def _cell(
        self,
        fleet_claims: Sequence[ClaimRecord],
        mileage: Sequence[MileageLog],
        baselines: Mapping[BaselineKey, BaselineResult],
        category: MileageCategory,
        coverage: Coverage,
    ) -> MatrixCell:
        if not self._strict and category_miles(mileage, category) <= 0:
            self._log.warning("cell_no_data", category=category.value, coverage=coverage.value)
            return MissingCell(category, coverage, "no fleet miles")

        fleet = fleet_cell(fleet_claims, mileage, category, coverage, self._confidence)
        baseline = baselines.get((category, coverage))
        if baseline is None:
            if self._strict:
                raise InvariantError(
                    f"No baseline for {category.value}/{coverage.value}",
                    details={"category": category.value, "coverage": coverage.value},
                )
            self._log.warning("cell_no_data", category=category.value, coverage=coverage.value)
            return MissingCell(category, coverage, "no baseline")

        non_payment = sum(1 for c in fleet_claims if _in_cell(c, category, coverage) and not c.countable)
        return compare_cell(category, coverage, fleet, baseline.estimate, non_payment)


def full_matrix(
    fleet_claims: Sequence[ClaimRecord],
    mileage: Sequence[MileageLog],
    baselines: Mapping[BaselineKey, BaselineResult],
    confidence: float = 0.95,
    strict: bool = False,
) -> list[MatrixCell]:
    """Functional entry point for :class:`ComparisonMatrix`."""
    return ComparisonMatrix(confidence, strict).build(fleet_claims, mileage, baselines)
