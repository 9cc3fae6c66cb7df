"""Input schemas, parsing, validation and driving-mode attribution."""

from src.ingestion.loader import InputBundle, load_fleet_inputs, load_inputs, locate_table
from src.ingestion.models import (
    ClaimRecord,
    EngagementTrace,
    ExposureRecord,
    MileageLog,
    StudyWindows,
    VmtInputRow,
    VmtScope,
    ZipCodeSet,
    ZipRow,
)
from src.ingestion.modes import (
    attribute_modes,
    build_zip_sets,
    classify_mode,
    filter_claims_by_zip,
    filter_exposure_by_zip,
    load_engagement_traces,
)
from src.ingestion.parser import (
    DatasetParser,
    ParsedDataset,
    TableSchema,
    parse_dataset,
    write_dataset,
)

__all__ = [
    "InputBundle",
    "load_fleet_inputs",
    "load_inputs",
    "locate_table",
    "ClaimRecord",
    "EngagementTrace",
    "ExposureRecord",
    "MileageLog",
    "StudyWindows",
    "VmtInputRow",
    "VmtScope",
    "ZipCodeSet",
    "ZipRow",
    "attribute_modes",
    "build_zip_sets",
    "classify_mode",
    "filter_claims_by_zip",
    "filter_exposure_by_zip",
    "load_engagement_traces",
    "DatasetParser",
    "ParsedDataset",
    "TableSchema",
    "parse_dataset",
    "write_dataset",
]
