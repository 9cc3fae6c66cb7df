"""Parsing, validation and canonical serialization of the input tables."""

import json
import math
import re
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import pandas as pd
import structlog
from pydantic import BaseModel, ValidationError

from src.core.exceptions import EmptyFileError, IngestionError, MalformedRowError, SchemaMismatchError
from src.ingestion.models import (
    DEFAULT_WINDOWS,
    ClaimRecord,
    ExposureRecord,
    MileageLog,
    StudyWindows,
    VmtInputRow,
    ZipRow,
)

logger = structlog.get_logger()

# "Error tokenizing data. C error: Expected 9 fields in line 263, saw 10"
_TOKENIZER_LINE = re.compile(r"line (\d+)")


class TableSchema(str, Enum):
    """The five input tables."""

    CLAIMS = "claims"
    EXPOSURE = "exposure"
    MILEAGE = "mileage"
    ZIPS = "zips"
    VMT_INPUTS = "vmt_inputs"

    @property
    def model(self) -> type[BaseModel]:
        return _MODELS[self]

    @property
    def columns(self) -> tuple[str, ...]:
        """Canonical column order."""
        return _COLUMNS[self]

    @property
    def required_columns(self) -> frozenset[str]:
        return frozenset(self.columns) - _OPTIONAL_COLUMNS.get(self, frozenset())


_MODELS: dict[TableSchema, type[BaseModel]] = {
    TableSchema.CLAIMS: ClaimRecord,
    TableSchema.EXPOSURE: ExposureRecord,
    TableSchema.MILEAGE: MileageLog,
    TableSchema.ZIPS: ZipRow,
    TableSchema.VMT_INPUTS: VmtInputRow,
}

_COLUMNS: dict[TableSchema, tuple[str, ...]] = {
    TableSchema.CLAIMS: (
        "claim_id",
        "coverage",
        "occurrence_date",
        "zip_code",
        "region",
        "source",
        "liability_payment_expected",
        "mode",
        "mode_override",
    ),
    TableSchema.EXPOSURE: ("region", "zip_code", "coverage_year", "policy_years"),
    TableSchema.MILEAGE: ("region", "mode", "miles"),
    TableSchema.ZIPS: ("region", "zip_code"),
    TableSchema.VMT_INPUTS: (
        "region_scope",
        "region_name",
        "year",
        "month",
        "total_vmt_miles",
        "registered_vehicles",
        "population",
        "vehicles_per_capita",
    ),
}

_OPTIONAL_COLUMNS: dict[TableSchema, frozenset[str]] = {
    TableSchema.CLAIMS: frozenset({"mode_override"}),
}


@dataclass(frozen=True)
class ParsedDataset:
    """Validated, immutable records of one input table."""

    schema: TableSchema
    path: Path | None
    records: tuple[Any, ...]

    def __len__(self) -> int:
        return len(self.records)

    def summary(self) -> dict[str, Any]:
        """Row count plus the totals meaningful for this table."""
        info: dict[str, Any] = {"table": self.schema.value, "rows": len(self.records)}
        if self.schema is TableSchema.CLAIMS:
            counted = sum(1 for r in self.records if r.countable)
            info["counted_claims"] = counted
            info["non_payment_claims"] = len(self.records) - counted
            info["fleet_claims"] = sum(1 for r in self.records if r.is_fleet)
        elif self.schema is TableSchema.EXPOSURE:
            info["policy_years_total"] = math.fsum(r.policy_years for r in self.records)
        elif self.schema is TableSchema.MILEAGE:
            info["miles_total"] = math.fsum(r.miles for r in self.records)
        return info


class DatasetParser:
    """Reads a delimited-text or JSON table and validates every row."""

    def __init__(self, windows: StudyWindows | None = None) -> None:
        self._windows = windows or DEFAULT_WINDOWS
        self._log = logger.bind(component="dataset_parser")

    def parse(self, path: Path, schema: TableSchema) -> ParsedDataset:
        """
        Parse a table file into typed records.

        Args:
            path: `.csv` (comma, UTF-8, header row) or `.json` (list of objects)
            schema: Which of the five tables the file holds

        Returns:
            ParsedDataset with one record per row, order preserved

        Raises:
            EmptyFileError: No data rows
            SchemaMismatchError: Header disagrees with the schema
            MalformedRowError: A row violates a field invariant
        """
        path = Path(path)
        if not path.is_file():
            raise IngestionError(f"Input file not found: {path}", path=str(path))

        if path.suffix.lower() == ".json":
            rows = self._read_json(path, schema)
        else:
            rows = self._read_csv(path, schema)

        model = schema.model
        context = {"windows": self._windows}
        records = []
        for index, row in enumerate(rows, start=1):
            try:
                records.append(model.model_validate(row, context=context))
            except ValidationError as e:
                error = e.errors()[0]
                field = str(error["loc"][0]) if error["loc"] else None
                raise MalformedRowError(
                    f"{path.name} row {index}: {error['msg']}",
                    row=index,
                    field=field,
                    path=str(path),
                    details={"row": index, "field": field, "value": row.get(field) if field else None},
                ) from e

        dataset = ParsedDataset(schema=schema, path=path, records=tuple(records))
        self._log.info("dataset_parsed", **dataset.summary(), path=str(path))
        return dataset

    def _read_csv(self, path: Path, schema: TableSchema) -> list[dict[str, Any]]:
        try:
            frame = pd.read_csv(
                path,
                dtype=str,
                keep_default_na=False,
                encoding="utf-8",
                skip_blank_lines=True,
            )
        except pd.errors.EmptyDataError as e:
            raise EmptyFileError(f"{path.name} is empty", path=str(path)) from e
        except UnicodeDecodeError as e:
            raise _not_utf8(path, e) from e
        except pd.errors.ParserError as e:
            match = _TOKENIZER_LINE.search(str(e))
            if match is None:
                raise SchemaMismatchError(
                    f"{path.name} is not a well-formed CSV table", path=str(path), details={"error": str(e)}
                ) from e
            # line 1 is the header
            row = int(match.group(1)) - 1
            raise MalformedRowError(
                f"{path.name} row {row}: wrong number of fields",
                row=row,
                path=str(path),
                details={"row": row, "error": str(e)},
            ) from e

        header = [str(c).strip() for c in frame.columns]
        self._check_header(path, schema, header)
        if frame.empty:
            raise EmptyFileError(f"{path.name} has a header but no rows", path=str(path))

        frame.columns = header
        return [
            {key: _cell(value) for key, value in row.items()}
            for row in frame.to_dict(orient="records")
        ]

    def _read_json(self, path: Path, schema: TableSchema) -> list[dict[str, Any]]:
        text = read_utf8(path)
        if not text.strip():
            raise EmptyFileError(f"{path.name} is empty", path=str(path))
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as e:
            raise IngestionError(f"{path.name} is not valid JSON: {e}", path=str(path)) from e
        if not isinstance(rows, list) or not all(isinstance(r, dict) for r in rows):
            raise SchemaMismatchError(f"{path.name} must hold a list of objects", path=str(path))
        if not rows:
            raise EmptyFileError(f"{path.name} holds no rows", path=str(path))
        for row in rows:
            self._check_header(path, schema, list(row))
        return rows

    def _check_header(self, path: Path, schema: TableSchema, header: Sequence[str]) -> None:
        present = set(header)
        missing = sorted(schema.required_columns - present)
        unknown = sorted(present - set(schema.columns))
        if missing or unknown:
            raise SchemaMismatchError(
                f"{path.name} does not match the {schema.value} schema",
                path=str(path),
                details={"missing": missing, "unknown": unknown},
            )


def _cell(value: Any) -> str | None:
    # short rows come back padded with NaN
    if not isinstance(value, str):
        return None
    return value.strip() or None


def _not_utf8(path: Path, error: UnicodeDecodeError) -> IngestionError:
    return IngestionError(
        f"{path.name} is not valid UTF-8 (byte offset {error.start})",
        path=str(path),
        details={"offset": error.start},
    )


def read_utf8(path: Path) -> str:
    """Whole file as text; undecodable bytes are an ingestion error."""
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise _not_utf8(path, e) from e


def parse_dataset(
    path: Path,
    schema: TableSchema,
    windows: StudyWindows | None = None,
) -> ParsedDataset:
    """Parse one input table."""
    return DatasetParser(windows).parse(path, schema)


def _canonical(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def canonical_rows(schema: TableSchema, records: Sequence[BaseModel]) -> list[dict[str, Any]]:
    """JSON-mode dumps of the records, keyed in canonical column order."""
    rows = []
    for record in records:
        dumped = record.model_dump(mode="json")
        rows.append({column: dumped.get(column) for column in schema.columns})
    return rows


def write_dataset(
    schema: TableSchema,
    records: Sequence[BaseModel],
    path: Path,
) -> Path:
    """
    Write records in canonical form.

    CSV: schema column order, ISO dates, ``true``/``false``, ``repr`` floats,
    ``\\n`` line endings. JSON: a list of objects with the same field names.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = canonical_rows(schema, records)

    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
        return path

    frame = pd.DataFrame(
        [[_canonical(row[c]) for c in schema.columns] for row in rows],
        columns=list(schema.columns),
        dtype=str,
    )
    frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    return path
