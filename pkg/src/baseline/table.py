"""`baseline.csv`: writing computed baselines and reading curated ones back."""

from collections.abc import Mapping, Sequence
from pathlib import Path

import pandas as pd
import structlog
from pydantic import ValidationError

from src.baseline.builder import BaselineKey, BaselineResult
from src.core.domain import CATEGORY_ORDER, COVERAGE_ORDER, Coverage, MileageCategory, Region
from src.core.exceptions import EmptyFileError, MalformedRowError, SchemaMismatchError
from src.core.tables import read_table, write_table
from src.stats.intervals import IntervalMethod, RateEstimate

logger = structlog.get_logger()

BASELINE_COLUMNS: tuple[str, ...] = (
    "category",
    "coverage",
    "confidence",
    "rate_cpmm",
    "ci_low",
    "ci_high",
    "claim_count_total",
    "exposure_mmi_total",
    *(
        f"{region.value}_{suffix}"
        for region in Region
        for suffix in ("weight", "claim_count", "exposure_mmi", "frequency_cpmm")
    ),
)

REQUIRED_COLUMNS = frozenset({"category", "coverage", "rate_cpmm", "ci_low", "ci_high"})


def _number(value: float | int | None) -> str:
    if value is None:
        return ""
    return repr(value)


def baseline_frame(baselines: Mapping[BaselineKey, BaselineResult]) -> pd.DataFrame:
    """One row per category x coverage in reporting order."""
    rows = []
    for category in CATEGORY_ORDER:
        for coverage in COVERAGE_ORDER:
            result = baselines.get((category, coverage))
            if result is None:
                continue
            estimate = result.estimate
            row = [
                category.value,
                coverage.value,
                repr(estimate.confidence),
                repr(estimate.rate_cpmm),
                repr(estimate.ci_low_cpmm),
                repr(estimate.ci_high_cpmm),
                _number(result.claim_count_total),
                _number(result.exposure_mmi_total),
            ]
            regional = {r.region: r for r in result.per_region}
            for region in Region:
                weight = result.mix.weights.get(region, 0.0) if result.mix else None
                freq = regional.get(region)
                row.extend(
                    [
                        _number(weight),
                        _number(freq.claim_count if freq else None),
                        _number(freq.exposure_mmi if freq else None),
                        _number(freq.frequency_cpmm if freq else None),
                    ]
                )
            rows.append(row)
    return pd.DataFrame(rows, columns=list(BASELINE_COLUMNS))


def write_baseline_csv(
    baselines: Mapping[BaselineKey, BaselineResult],
    path: Path,
    header_lines: Sequence[str] = (),
) -> Path:
    """Write `baseline.csv` with optional ``#`` provenance lines on top."""
    return write_table(baseline_frame(baselines), path, header_lines)


def read_baseline_csv(path: Path, confidence: float = 0.95) -> dict[BaselineKey, BaselineResult]:
    """
    Load baselines from a `baseline.csv`, computed or curated.

    Only category, coverage, rate_cpmm, ci_low and ci_high are required; a
    missing or blank confidence falls back to ``confidence``. Regional
    columns are not read back.

    Raises:
        EmptyFileError: No data rows
        SchemaMismatchError: Required columns absent
        MalformedRowError: A row fails validation
    """
    path = Path(path)
    frame = read_table(path)
    if frame.empty:
        raise EmptyFileError(f"{path.name} has no baseline rows", path=str(path))
    missing = sorted(REQUIRED_COLUMNS - set(frame.columns))
    if missing:
        raise SchemaMismatchError(
            f"{path.name} is missing columns {missing}",
            path=str(path),
            details={"missing": missing},
        )

    baselines: dict[BaselineKey, BaselineResult] = {}
    for index, raw in enumerate(frame.to_dict(orient="records"), start=1):
        try:
            category = MileageCategory(raw["category"])
            coverage = Coverage(raw["coverage"])
            estimate = RateEstimate(
                rate_cpmm=float(raw["rate_cpmm"]),
                ci_low_cpmm=float(raw["ci_low"]),
                ci_high_cpmm=float(raw["ci_high"]),
                confidence=float(raw.get("confidence") or confidence),
                method=IntervalMethod.NORMAL_APPROX,
            )
        except (ValueError, ValidationError) as e:
            raise MalformedRowError(
                f"{path.name} row {index}: {e}",
                row=index,
                path=str(path),
            ) from e
        if (category, coverage) in baselines:
            raise MalformedRowError(
                f"{path.name} row {index}: duplicate {category.value}/{coverage.value}",
                row=index,
                path=str(path),
            )
        baselines[(category, coverage)] = BaselineResult(category=category, coverage=coverage, estimate=estimate)

    logger.info("baselines_read", path=str(path), cells=len(baselines))
    return baselines
