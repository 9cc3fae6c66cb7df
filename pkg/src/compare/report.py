"""Machine- and human-readable comparison reports."""

from collections.abc import Sequence
from pathlib import Path
from typing import Literal

import pandas as pd
from pydantic import BaseModel, Field, ValidationError
from rich.table import Table

from src.compare.matrix import ComparisonResult, MatrixCell
from src.core.domain import Coverage, MileageCategory
from src.core.exceptions import IngestionError
from src.core.provenance import Provenance
from src.core.tables import write_table
from src.stats.rounding import format_percent, format_rate

NO_DATA = "no data"

COMPARISON_COLUMNS: tuple[str, ...] = (
    "category",
    "coverage",
    "fleet_k",
    "fleet_mmi",
    "fleet_rate",
    "fleet_ci_low",
    "fleet_ci_high",
    "baseline_rate",
    "baseline_ci_low",
    "baseline_ci_high",
    "reduction_pct_unrounded",
    "reduction_pct_display",
    "verdict",
)

FIGURE_COLUMNS: tuple[str, ...] = ("category", "coverage", "series", "rate", "ci_low", "ci_high", "verdict")


class CellReport(BaseModel):
    """One matrix cell as stored in `report.json`."""

    category: MileageCategory
    coverage: Coverage
    status: Literal["compared", "no data"] = "compared"
    reason: str | None = None
    fleet_k: int | None = None
    fleet_mmi: float | None = None
    fleet_rate: float | None = None
    fleet_ci_low: float | None = None
    fleet_ci_high: float | None = None
    fleet_non_payment_claims: int | None = None
    baseline_rate: float | None = None
    baseline_ci_low: float | None = None
    baseline_ci_high: float | None = None
    reduction_pct_unrounded: float | None = None
    reduction_pct_display: int | None = None
    verdict: str | None = None

    @classmethod
    def from_cell(cls, cell: MatrixCell) -> "CellReport":
        if not isinstance(cell, ComparisonResult):
            return cls(category=cell.category, coverage=cell.coverage, status=NO_DATA, reason=cell.reason)
        return cls(
            category=cell.category,
            coverage=cell.coverage,
            fleet_k=cell.fleet.claim_count,
            fleet_mmi=cell.fleet.exposure_mmi,
            fleet_rate=cell.fleet.rate_cpmm,
            fleet_ci_low=cell.fleet.ci_low_cpmm,
            fleet_ci_high=cell.fleet.ci_high_cpmm,
            fleet_non_payment_claims=cell.non_payment_claims,
            baseline_rate=cell.baseline.rate_cpmm,
            baseline_ci_low=cell.baseline.ci_low_cpmm,
            baseline_ci_high=cell.baseline.ci_high_cpmm,
            reduction_pct_unrounded=cell.reduction_percent_unrounded,
            reduction_pct_display=cell.reduction_percent,
            verdict=cell.verdict.value,
        )

    @property
    def compared(self) -> bool:
        return self.status == "compared"


class ComparisonReport(BaseModel):
    """Structured report: provenance header followed by the eight cells."""

    provenance: Provenance
    confidence: float
    vmt_selection: str
    baseline_source: str = "computed"
    cells: list[CellReport] = Field(default_factory=list)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def write(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding="utf-8")
        return path

    @classmethod
    def read(cls, path: Path) -> "ComparisonReport":
        path = Path(path)
        try:
            return cls.model_validate_json(path.read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise IngestionError(f"No report at {path}", path=str(path)) from e
        except ValidationError as e:
            raise IngestionError(f"{path.name} is not a comparison report: {e}", path=str(path)) from e


def build_report(
    cells: Sequence[MatrixCell],
    provenance: Provenance,
    confidence: float,
    vmt_selection: str,
    baseline_source: str = "computed",
) -> ComparisonReport:
    return ComparisonReport(
        provenance=provenance,
        confidence=confidence,
        vmt_selection=vmt_selection,
        baseline_source=baseline_source,
        cells=[CellReport.from_cell(c) for c in cells],
    )


def _raw(value: float | int | None) -> str:
    if value is None:
        return ""
    return repr(value)


def comparison_frame(report: ComparisonReport) -> pd.DataFrame:
    rows = []
    for cell in report.cells:
        rows.append(
            [
                cell.category.value,
                cell.coverage.value,
                _raw(cell.fleet_k),
                _raw(cell.fleet_mmi),
                _raw(cell.fleet_rate),
                _raw(cell.fleet_ci_low),
                _raw(cell.fleet_ci_high),
                _raw(cell.baseline_rate),
                _raw(cell.baseline_ci_low),
                _raw(cell.baseline_ci_high),
                _raw(cell.reduction_pct_unrounded),
                _raw(cell.reduction_pct_display),
                cell.verdict if cell.compared else NO_DATA,
            ]
        )
    return pd.DataFrame(rows, columns=list(COMPARISON_COLUMNS))


def write_comparison_csv(report: ComparisonReport, path: Path) -> Path:
    """Write `comparison.csv` headed by the report's provenance lines."""
    return write_table(comparison_frame(report), path, report.provenance.comment_lines())


def figure_frame(report: ComparisonReport) -> pd.DataFrame:
    """Long table with one Fleet and one Baseline row per compared cell."""
    rows = []
    for cell in report.cells:
        if not cell.compared:
            continue
        for series, rate, low, high in (
            ("Fleet", cell.fleet_rate, cell.fleet_ci_low, cell.fleet_ci_high),
            ("Baseline", cell.baseline_rate, cell.baseline_ci_low, cell.baseline_ci_high),
        ):
            rows.append([cell.category.value, cell.coverage.value, series, _raw(rate), _raw(low), _raw(high), cell.verdict])
    return pd.DataFrame(rows, columns=list(FIGURE_COLUMNS))


def write_figure_csv(report: ComparisonReport, path: Path) -> Path:
    return write_table(figure_frame(report), path, report.provenance.comment_lines())


def _interval(low: float | None, high: float | None) -> str:
    if low is None or high is None:
        return ""
    return f"[{format_rate(low)}, {format_rate(high)}]"


def render_table(report: ComparisonReport) -> Table:
    """Rich table with 2-decimal rates, integer reductions and S/NS markers."""
    confidence = format_percent(report.confidence * 100)
    table = Table(title=f"Liability claims per million miles ({confidence} CI)")
    table.add_column("Category", style="cyan")
    table.add_column("Coverage", style="cyan")
    table.add_column("Fleet k", justify="right")
    table.add_column("Fleet Mmi", justify="right")
    table.add_column("Fleet cpmm", justify="right")
    table.add_column("Fleet CI")
    table.add_column("Baseline cpmm", justify="right")
    table.add_column("Baseline CI")
    table.add_column("Reduction", justify="right")
    table.add_column("Sig.", justify="center")

    for cell in report.cells:
        if not cell.compared:
            table.add_row(cell.category.value, cell.coverage.value, *([""] * 7), f"[dim]{NO_DATA}[/dim]")
            continue
        marker = "[green]S[/green]" if cell.verdict == "S" else "[yellow]NS[/yellow]"
        table.add_row(
            cell.category.value,
            cell.coverage.value,
            str(cell.fleet_k),
            f"{cell.fleet_mmi:.2f}" if cell.fleet_mmi is not None else "",
            format_rate(cell.fleet_rate or 0.0),
            _interval(cell.fleet_ci_low, cell.fleet_ci_high),
            format_rate(cell.baseline_rate or 0.0),
            _interval(cell.baseline_ci_low, cell.baseline_ci_high),
            format_percent(cell.reduction_pct_unrounded or 0.0),
            marker,
        )
    return table


def report_summary(report: ComparisonReport) -> dict[str, int]:
    """Counts for log events and the CLI footer."""
    compared = [c for c in report.cells if c.compared]
    return {
        "cells": len(report.cells),
        "compared": len(compared),
        "significant": sum(1 for c in compared if c.verdict == "S"),
        "no_data": len(report.cells) - len(compared),
    }

