"""Stage orchestration: validate, vmt, baseline, compare, simulate, report."""

from collections import defaultdict
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import structlog

from src.baseline import BaselineKey, BaselineResult, build_baselines, read_baseline_csv, write_baseline_csv
from src.compare import ComparisonReport, build_report, full_matrix, write_comparison_csv, write_figure_csv
from src.core.config import Settings
from src.core.domain import Region
from src.core.exceptions import ClaimsBenchError
from src.core.logging import bound_stage
from src.core.provenance import Provenance, build_provenance
from src.ingestion import (
    InputBundle,
    ParsedDataset,
    StudyWindows,
    TableSchema,
    filter_exposure_by_zip,
    load_fleet_inputs,
    load_inputs,
    locate_table,
)
from src.ingestion.parser import DatasetParser
from src.simulator import SimConfig, coverage_suite, simulate_claims, write_coverage_csv
from src.vmt import VmtEstimate, estimate_vmt, write_vmt_csv

logger = structlog.get_logger()

VMT_FILE = "vmt.csv"
BASELINE_FILE = "baseline.csv"
COMPARISON_FILE = "comparison.csv"
REPORT_FILE = "report.json"
FIGURE_FILE = "figure.csv"
COVERAGE_FILE = "coverage.csv"


@dataclass
class ValidationReport:
    """Outcome of `validate`: per-table summaries plus derived checks."""

    datasets: list[ParsedDataset] = field(default_factory=list)
    traces: int = 0
    vmt_region_years: int = 0

    def rows(self) -> list[dict[str, Any]]:
        return [{"table": d.schema.value, "path": str(d.path), **d.summary()} for d in self.datasets]


@dataclass
class SimulationOutcome:
    """Files written by `simulate`."""

    tables: dict[TableSchema, Path]
    coverage_path: Path | None


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Bind the stage to log events and to any toolkit error raised inside."""
    with bound_stage(name):
        try:
            yield
        except ClaimsBenchError as e:
            if e.stage is None:
                e.stage = name
            raise


def years_by_region(bundle: InputBundle) -> dict[Region, set[int]]:
    """Coverage years that need a VMT estimate: those of zip-calibrated exposure."""
    years: dict[Region, set[int]] = defaultdict(set)
    for row in filter_exposure_by_zip(bundle.exposure, bundle.zips):
        years[row.region].add(row.coverage_year)
    return dict(years)


class PipelineRunner:
    """Runs the pipeline stages for one set of settings."""

    def __init__(self, settings: Settings) -> None:
        self.settings = settings
        self.windows = StudyWindows(
            human_start=settings.human_window_start,
            human_end=settings.human_window_end,
            fleet_start=settings.fleet_window_start,
            fleet_end=settings.fleet_window_end,
        )
        self._log = logger.bind(component="pipeline")

    @property
    def inputs_dir(self) -> Path:
        return Path(self.settings.inputs_dir)

    @property
    def output_dir(self) -> Path:
        return Path(self.settings.output_dir)

    def load(self) -> InputBundle:
        with stage("ingestion"):
            return load_inputs(self.inputs_dir, self.windows)

    def provenance(self, paths: Sequence[Path]) -> Provenance:
        return build_provenance(self.settings, paths)

    def validate(self) -> ValidationReport:
        """
        Parse every table, classify traces and check VMT coverage of the exposure years.

        Raises on the first violation; the error names its stage.
        """
        report = ValidationReport()
        with stage("ingestion"):
            parser = DatasetParser(self.windows)
            for schema in TableSchema:
                report.datasets.append(parser.parse(locate_table(self.inputs_dir, schema), schema))
            bundle = load_inputs(self.inputs_dir, self.windows)
            report.traces = len(bundle.traces)
        report.vmt_region_years = len(self.vmt(bundle))
        self._log.info("inputs_valid", tables=len(report.datasets), traces=report.traces)
        return report

    def vmt(self, bundle: InputBundle) -> dict[tuple[Region, int], VmtEstimate]:
        with stage("vmt"):
            return estimate_vmt(
                bundle.vmt_inputs,
                years_by_region(bundle),
                self.settings.region_vmt_sources,
                self.settings.vmt_selection,
            )

    def baselines(
        self,
        bundle: InputBundle,
        vmt: dict[tuple[Region, int], VmtEstimate],
    ) -> dict[BaselineKey, BaselineResult]:
        with stage("baseline"):
            return build_baselines(
                bundle.human_claims,
                bundle.exposure,
                bundle.zips,
                vmt,
                bundle.mileage,
                confidence=self.settings.confidence,
                strict=self.settings.strict_mode,
            )

    def run_vmt(self) -> Path:
        """Write `vmt.csv`."""
        bundle = self.load()
        estimates = self.vmt(bundle)
        provenance = self.provenance(bundle.paths)
        return write_vmt_csv(estimates, self.output_dir / VMT_FILE, provenance.comment_lines())

    def run_baseline(self) -> Path:
        """Write `vmt.csv` and `baseline.csv`."""
        bundle = self.load()
        estimates = self.vmt(bundle)
        baselines = self.baselines(bundle, estimates)
        header = self.provenance(bundle.paths).comment_lines()
        write_vmt_csv(estimates, self.output_dir / VMT_FILE, header)
        return write_baseline_csv(baselines, self.output_dir / BASELINE_FILE, header)

    def run_compare(self, baseline_file: Path | None = None) -> ComparisonReport:
        """
        Build the matrix and write `comparison.csv` and `report.json`.

        With ``baseline_file`` only the fleet tables are read and baselines come
        from that file; otherwise they are computed and written alongside.
        """
        if baseline_file is not None:
            with stage("ingestion"):
                fleet_claims, mileage, paths = load_fleet_inputs(self.inputs_dir, self.windows)
            with stage("baseline"):
                baselines = read_baseline_csv(Path(baseline_file), self.settings.confidence)
            paths = [*paths, Path(baseline_file)]
            source = Path(baseline_file).name
        else:
            bundle = self.load()
            estimates = self.vmt(bundle)
            baselines = self.baselines(bundle, estimates)
            fleet_claims, mileage, paths = bundle.fleet_claims, list(bundle.mileage), list(bundle.paths)
            header = self.provenance(paths).comment_lines()
            write_vmt_csv(estimates, self.output_dir / VMT_FILE, header)
            write_baseline_csv(baselines, self.output_dir / BASELINE_FILE, header)
            source = "computed"

        with stage("compare"):
            cells = full_matrix(
                fleet_claims,
                mileage,
                baselines,
                confidence=self.settings.confidence,
                strict=self.settings.strict_mode,
            )
            report = build_report(
                cells,
                self.provenance(paths),
                confidence=self.settings.confidence,
                vmt_selection=self.settings.vmt_selection.value,
                baseline_source=source,
            )
            write_comparison_csv(report, self.output_dir / COMPARISON_FILE)
            report.write(self.output_dir / REPORT_FILE)
        self._log.info("comparison_written", output_dir=str(self.output_dir), baseline_source=source)
        return report

    def run_report(self, report_path: Path | None = None) -> ComparisonReport:
        """Reload `report.json` and write the plot-ready `figure.csv`."""
        with stage("report"):
            report = ComparisonReport.read(report_path or self.output_dir / REPORT_FILE)
            write_figure_csv(report, self.output_dir / FIGURE_FILE)
        return report

    def run_simulate(self, config: SimConfig, with_coverage: bool = True) -> SimulationOutcome:
        """Write a synthetic dataset into the inputs directory and, optionally, `coverage.csv`."""
        with stage("simulate"):
            tables = simulate_claims(config, self.inputs_dir, self.windows)
            coverage_path = None
            if with_coverage:
                results = coverage_suite(config.coverage_lambdas, config.trials, config.confidence, config.seed)
                coverage_path = write_coverage_csv(
                    results,
                    self.output_dir / COVERAGE_FILE,
                    [*self.provenance(tables.values()).comment_lines(), f"# seed: {config.seed}"],
                )
        return SimulationOutcome(tables=tables, coverage_path=coverage_path)
