"""Driving-mode attribution and zip-code calibration of claims."""

import json
from collections.abc import Iterable, Mapping, Sequence
from datetime import timedelta
from pathlib import Path

import structlog
from pydantic import ValidationError

from src.core.domain import DrivingMode, Region
from src.core.exceptions import (
    EmptyFileError,
    IngestionError,
    InvalidTraceError,
    MalformedRowError,
    SchemaMismatchError,
)
from src.ingestion.models import ClaimRecord, EngagementTrace, ExposureRecord, ZipCodeSet, ZipRow
from src.ingestion.parser import read_utf8

logger = structlog.get_logger()

# A collision is a TO collision if the ADS was engaged at any instant in
# the closed window [impact - 5 s, impact].
TAKEOVER_WINDOW = timedelta(seconds=5)


def classify_mode(trace: EngagementTrace) -> DrivingMode:
    """
    Attribute a collision to a driving mode.

    RO when nobody sits in the driver's seat; TO when the ADS was engaged at
    any time in the five seconds up to and including the impact; Manual otherwise.

    Raises:
        InvalidTraceError: If intervals overlap or are unsorted
    """
    trace.check()
    if not trace.human_in_driver_seat:
        return DrivingMode.RO

    window_start = trace.impact_time - TAKEOVER_WINDOW
    for start, end in trace.intervals:
        if start <= trace.impact_time and end >= window_start:
            return DrivingMode.TO
    return DrivingMode.MANUAL


def load_engagement_traces(path: Path) -> dict[str, EngagementTrace]:
    """Read `traces.json`: a list of trace objects keyed by claim_id."""
    path = Path(path)
    text = read_utf8(path)
    if not text.strip():
        raise EmptyFileError(f"{path.name} is empty", path=str(path))
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as e:
        raise IngestionError(f"{path.name} is not valid JSON: {e}", path=str(path)) from e
    if not isinstance(rows, list) or not all(isinstance(r, dict) for r in rows):
        raise SchemaMismatchError(f"{path.name} must hold a list of trace objects", path=str(path))

    traces: dict[str, EngagementTrace] = {}
    for index, row in enumerate(rows, start=1):
        try:
            trace = EngagementTrace.model_validate(row)
        except ValidationError as e:
            error = e.errors()[0]
            field = str(error["loc"][0]) if error["loc"] else None
            raise MalformedRowError(
                f"{path.name} entry {index}: {error['msg']}",
                row=index,
                field=field,
                path=str(path),
            ) from e
        except InvalidTraceError as e:
            raise InvalidTraceError(
                f"{path.name} entry {index}: {e.message}", details={**e.details, "entry": index}
            ) from e
        if not trace.claim_id:
            raise MalformedRowError(f"{path.name} entry {index}: missing claim_id", row=index, field="claim_id")
        traces[trace.claim_id] = trace
    return traces


def attribute_modes(
    claims: Sequence[ClaimRecord],
    traces: Mapping[str, EngagementTrace],
) -> list[ClaimRecord]:
    """
    Settle the driving mode of every fleet claim.

    A curated ``mode_override`` wins; otherwise a trace, when present, decides;
    otherwise the stored mode stands.
    """
    log = logger.bind(component="mode_attribution")
    attributed: list[ClaimRecord] = []
    for claim in claims:
        if not claim.is_fleet:
            attributed.append(claim)
            continue

        mode = claim.mode
        trace = traces.get(claim.claim_id)
        if trace is not None:
            classified = classify_mode(trace)
            if classified is not claim.mode:
                log.warning(
                    "mode_reclassified",
                    claim_id=claim.claim_id,
                    stored=claim.mode.value if claim.mode else None,
                    classified=classified.value,
                )
            mode = classified
        if claim.mode_override is not None:
            mode = claim.mode_override

        attributed.append(claim if mode is claim.mode else claim.model_copy(update={"mode": mode}))
    return attributed


def build_zip_sets(rows: Iterable[ZipRow]) -> dict[Region, ZipCodeSet]:
    """Group zip rows into one set per region."""
    grouped: dict[Region, set[str]] = {}
    for row in rows:
        grouped.setdefault(row.region, set()).add(row.zip_code)
    return {region: ZipCodeSet(region, frozenset(codes)) for region, codes in grouped.items()}


def filter_claims_by_zip(
    claims: Sequence[ClaimRecord],
    zips: Mapping[Region, ZipCodeSet],
) -> list[ClaimRecord]:
    """Claims whose zip code is in their region's operating set, order preserved."""
    return [c for c in claims if c.region in zips and c.zip_code in zips[c.region]]


def filter_exposure_by_zip(
    exposure: Sequence[ExposureRecord],
    zips: Mapping[Region, ZipCodeSet],
) -> list[ExposureRecord]:
    """Exposure rows registered inside the operating zip codes."""
    return [e for e in exposure if e.region in zips and e.zip_code in zips[e.region]]
