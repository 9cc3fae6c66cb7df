"""Loading the full set of input tables from a directory."""

from dataclasses import dataclass, field
from pathlib import Path

import structlog

from src.core.domain import Region
from src.core.exceptions import IngestionError
from src.ingestion.models import (
    ClaimRecord,
    EngagementTrace,
    ExposureRecord,
    MileageLog,
    StudyWindows,
    VmtInputRow,
    ZipCodeSet,
)
from src.ingestion.modes import attribute_modes, build_zip_sets, load_engagement_traces
from src.ingestion.parser import DatasetParser, TableSchema

logger = structlog.get_logger()

TRACES_FILE = "traces.json"


def locate_table(inputs_dir: Path, schema: TableSchema) -> Path:
    """`<table>.csv`, falling back to `<table>.json`."""
    for suffix in (".csv", ".json"):
        candidate = inputs_dir / f"{schema.value}{suffix}"
        if candidate.is_file():
            return candidate
    raise IngestionError(
        f"No {schema.value}.csv or {schema.value}.json in {inputs_dir}",
        path=str(inputs_dir),
        details={"table": schema.value},
    )


@dataclass(frozen=True)
class InputBundle:
    """All validated inputs of one run."""

    claims: tuple[ClaimRecord, ...]
    exposure: tuple[ExposureRecord, ...]
    mileage: tuple[MileageLog, ...]
    zips: dict[Region, ZipCodeSet]
    vmt_inputs: tuple[VmtInputRow, ...]
    traces: dict[str, EngagementTrace] = field(default_factory=dict)
    paths: tuple[Path, ...] = ()

    @property
    def fleet_claims(self) -> list[ClaimRecord]:
        return [c for c in self.claims if c.is_fleet]

    @property
    def human_claims(self) -> list[ClaimRecord]:
        return [c for c in self.claims if not c.is_fleet]


def load_fleet_inputs(
    inputs_dir: Path,
    windows: StudyWindows | None = None,
) -> tuple[list[ClaimRecord], list[MileageLog], list[Path]]:
    """Claims (mode-attributed) and mileage only; enough for fleet cells."""
    inputs_dir = Path(inputs_dir)
    parser = DatasetParser(windows)
    claims_path = locate_table(inputs_dir, TableSchema.CLAIMS)
    mileage_path = locate_table(inputs_dir, TableSchema.MILEAGE)
    claims = parser.parse(claims_path, TableSchema.CLAIMS).records
    mileage = parser.parse(mileage_path, TableSchema.MILEAGE).records

    paths = [claims_path, mileage_path]
    traces: dict[str, EngagementTrace] = {}
    traces_path = inputs_dir / TRACES_FILE
    if traces_path.is_file():
        traces = load_engagement_traces(traces_path)
        paths.append(traces_path)
    return attribute_modes(claims, traces), list(mileage), paths


def load_inputs(inputs_dir: Path, windows: StudyWindows | None = None) -> InputBundle:
    """
    Parse all five tables plus the optional engagement traces.

    Fleet claims come back with their driving mode settled.
    """
    inputs_dir = Path(inputs_dir)
    parser = DatasetParser(windows)
    paths = {schema: locate_table(inputs_dir, schema) for schema in TableSchema}
    datasets = {schema: parser.parse(path, schema) for schema, path in paths.items()}

    traces: dict[str, EngagementTrace] = {}
    traces_path = inputs_dir / TRACES_FILE
    all_paths = list(paths.values())
    if traces_path.is_file():
        traces = load_engagement_traces(traces_path)
        all_paths.append(traces_path)

    claims = attribute_modes(datasets[TableSchema.CLAIMS].records, traces)
    bundle = InputBundle(
        claims=tuple(claims),
        exposure=datasets[TableSchema.EXPOSURE].records,
        mileage=datasets[TableSchema.MILEAGE].records,
        zips=build_zip_sets(datasets[TableSchema.ZIPS].records),
        vmt_inputs=datasets[TableSchema.VMT_INPUTS].records,
        traces=traces,
        paths=tuple(all_paths),
    )
    logger.info(
        "inputs_loaded",
        inputs_dir=str(inputs_dir),
        claims=len(bundle.claims),
        fleet_claims=len(bundle.fleet_claims),
        traces=len(traces),
    )
    return bundle
