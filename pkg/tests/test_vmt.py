"""Tests for VMT per vehicle estimation."""

import math
from pathlib import Path

import pytest

from src.core.config import default_vmt_sources
from src.core.domain import Region, VmtSelection
from src.core.exceptions import MissingVmtYearError, VmtInputError
from src.core.tables import read_table
from src.ingestion.models import VmtInputRow, VmtScope
from src.vmt import (
    aggregate_vmt_rows,
    estimate_vmt,
    select_conservative,
    vmt_per_vehicle_state,
    vmt_per_vehicle_urban,
    write_vmt_csv,
)
from tests.conftest import HUMAN_YEARS, vmt_rows

YEARS = {Region.SAN_FRANCISCO: HUMAN_YEARS, Region.PHOENIX: HUMAN_YEARS}


def rows(drop: tuple[str, int] | None = None) -> list[VmtInputRow]:
    columns = (
        "region_scope",
        "region_name",
        "year",
        "month",
        "total_vmt_miles",
        "registered_vehicles",
        "population",
        "vehicles_per_capita",
    )
    return [
        VmtInputRow.model_validate({k: (v if v != "" else None) for k, v in zip(columns, row)})
        for row in vmt_rows(drop)
    ]


def state_month(month: int, vehicles: float = 1000.0) -> VmtInputRow:
    return VmtInputRow(
        region_scope=VmtScope.STATE,
        region_name="California",
        year=2019,
        month=month,
        total_vmt_miles=1_000_000.0,
        registered_vehicles=vehicles,
    )


def test_state_and_urban_formulas() -> None:
    """Test annual VMT over vehicles, and over population x vehicles per capita."""
    assert vmt_per_vehicle_state(3.3e11, 3.0e7) == 11_000.0
    assert math.isclose(vmt_per_vehicle_urban(4.8e10, 6.0e6, 0.8), 10_000.0)


@pytest.mark.parametrize(
    ("call", "error"),
    [
        (lambda: vmt_per_vehicle_state(1.0, 0.0), ZeroDivisionError),
        (lambda: vmt_per_vehicle_state(0.0, 10.0), ValueError),
        (lambda: vmt_per_vehicle_urban(1.0, 100.0, 0.0), ZeroDivisionError),
        (lambda: select_conservative(0.0, 1.0), ValueError),
    ],
)
def test_formula_domain(call: object, error: type[Exception]) -> None:
    """Test rejection of zero denominators and non-positive totals."""
    with pytest.raises(error):
        call()  # type: ignore[operator]


def test_conservative_is_larger_estimate() -> None:
    """Test that the larger miles per vehicle gives the lower baseline."""
    assert select_conservative(11_000.0, 10_000.0) == 11_000.0
    assert select_conservative(9_500.0, 10_000.0) == 10_000.0


@pytest.mark.parametrize(("a", "b"), [(11_000.0, 10_000.0), (12_000.0, 12_000.0), (8_765.4, 13_210.9)])
def test_conservative_is_symmetric(a: float, b: float) -> None:
    """Test that argument order does not matter."""
    assert select_conservative(a, b) == select_conservative(b, a)


@pytest.mark.parametrize("scale", [0.5, 3.0, 1e4])
def test_estimators_are_homogeneous(scale: float) -> None:
    """Test that scaling miles and the vehicle base together leaves VMT per vehicle unchanged."""
    assert math.isclose(vmt_per_vehicle_state(3.6e11 * scale, 3.0e7 * scale), 12_000.0)
    assert math.isclose(vmt_per_vehicle_urban(4.8e10 * scale, 6.0e6 * scale, 0.8), 10_000.0)


def test_monthly_rows_are_summed() -> None:
    """Test that twelve monthly State rows collapse to one annual figure."""
    annual = aggregate_vmt_rows([state_month(m) for m in range(1, 13)])
    figure = annual[(VmtScope.STATE, "California", 2019)]

    assert figure.total_vmt_miles == 12_000_000.0
    assert figure.registered_vehicles == 1000.0


@pytest.mark.parametrize(
    "months",
    [list(range(1, 12)), [*range(1, 13), 5], [1] * 12],
)
def test_incomplete_months(months: list[int]) -> None:
    """Test that a year must have each month exactly once."""
    with pytest.raises(VmtInputError):
        aggregate_vmt_rows([state_month(m) for m in months])


def test_months_disagree_on_vehicles() -> None:
    """Test that monthly rows of one year share a vehicle count."""
    monthly = [state_month(m) for m in range(1, 12)] + [state_month(12, vehicles=2000.0)]

    with pytest.raises(VmtInputError, match="registered_vehicles"):
        aggregate_vmt_rows(monthly)


def test_estimates_by_selection() -> None:
    """Test the auto, state and urban rules on the fixture inputs."""
    sources = default_vmt_sources()
    auto = estimate_vmt(rows(), YEARS, sources)
    urban = estimate_vmt(rows(), YEARS, sources, VmtSelection.URBAN)
    state = estimate_vmt(rows(), YEARS, sources, VmtSelection.STATE)

    sf = auto[(Region.SAN_FRANCISCO, 2019)]
    assert math.isclose(sf.miles_per_vehicle_state, 11_000.0)
    assert math.isclose(sf.miles_per_vehicle_urban, 10_000.0)
    assert sf.selected == sf.miles_per_vehicle_state
    assert math.isclose(auto[(Region.PHOENIX, 2020)].selected, 12_000.0)
    assert math.isclose(urban[(Region.PHOENIX, 2020)].selected, 10_500.0)
    assert state[(Region.SAN_FRANCISCO, 2020)].selected == sf.miles_per_vehicle_state
    assert len(auto) == 4
    for key, estimate in auto.items():
        assert estimate.selected >= urban[key].selected
        assert estimate.selected >= state[key].selected


def test_missing_year_names_scope() -> None:
    """Test that a requested year without VMT fails naming region, year and scope."""
    with pytest.raises(MissingVmtYearError) as info:
        estimate_vmt(rows(drop=("Phoenix", 2020)), YEARS, default_vmt_sources())

    assert info.value.year == 2020
    assert info.value.region == "Phoenix"
    assert info.value.scope == "State"
    assert info.value.exit_code == 3
    assert "2020" in str(info.value)


def test_write_vmt_csv(tmp_path: Path) -> None:
    """Test the emitted table: provenance lines, region-year order, exact floats."""
    estimates = estimate_vmt(rows(), YEARS, default_vmt_sources())

    path = write_vmt_csv(estimates, tmp_path / "vmt.csv", ["# seed: none"])
    frame = read_table(path)

    assert path.read_text(encoding="utf-8").startswith("# seed: none\nregion,year,")
    assert list(frame["region"]) == ["Phoenix", "Phoenix", "SanFrancisco", "SanFrancisco"]
    assert list(frame["year"]) == ["2019", "2020", "2019", "2020"]
    assert float(frame["selected"][0]) == estimates[(Region.PHOENIX, 2019)].selected
    assert set(frame["selection"]) == {"auto"}
