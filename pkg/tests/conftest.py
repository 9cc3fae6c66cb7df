"""Shared fixtures: synthetic input tables written into tmp_path."""

import json
from collections.abc import Iterable, Sequence
from pathlib import Path

import pytest

# Fleet miles per category, split over the two regions.
FLEET_MILES = {
    ("SanFrancisco", "Manual"): 10_000_000,
    ("Phoenix", "Manual"): 4_436_298,
    ("SanFrancisco", "TO"): 20_000_000,
    ("Phoenix", "TO"): 15_228_320,
    ("SanFrancisco", "RO"): 1_000_000,
    ("Phoenix", "RO"): 2_868_506,
}

# Countable fleet claims per (mode, coverage); chosen so k / Mmi matches the published rates.
FLEET_COUNTS = {
    ("Manual", "BI"): 8,
    ("Manual", "PD"): 32,
    ("TO", "BI"): 3,
    ("TO", "PD"): 6,
    ("RO", "BI"): 0,
    ("RO", "PD"): 3,
}

PUBLISHED_MMI = {"Manual": 14.436298, "TO": 35.228320, "RO": 3.868506, "TO+RO": 39.096826}

# Published human baselines: rate, CI low, CI high.
CURATED_BASELINES = {
    ("Manual", "BI"): (1.01, 1.00, 1.02),
    ("Manual", "PD"): (3.34, 3.33, 3.36),
    ("TO", "BI"): (1.09, 1.08, 1.09),
    ("TO", "PD"): (3.17, 3.16, 3.18),
    ("RO", "BI"): (1.11, 1.10, 1.12),
    ("RO", "PD"): (3.26, 3.24, 3.27),
    ("TO+RO", "BI"): (1.09, 1.08, 1.09),
    ("TO+RO", "PD"): (3.17, 3.16, 3.18),
}

ZIPS = {"SanFrancisco": ["94103", "94110"], "Phoenix": ["85004", "85281"]}
OUTSIDE_ZIPS = {"SanFrancisco": "94501", "Phoenix": "85001"}

# Human claims inside the operating zips, per region and coverage.
HUMAN_COUNTS = {
    ("SanFrancisco", "BI"): 30,
    ("SanFrancisco", "PD"): 90,
    ("Phoenix", "BI"): 20,
    ("Phoenix", "PD"): 60,
}
HUMAN_YEARS = (2019, 2020)
POLICY_YEARS_PER_ZIP = {"SanFrancisco": 5000.0, "Phoenix": 6000.0}

# (state, registered vehicles, state VMT per vehicle, urban area, population, vehicles per capita, urban VMT per vehicle)
VMT_SOURCES = {
    "SanFrancisco": ("California", 30_000_000, 11_000, "San Francisco--Oakland, CA", 6_000_000, 0.8, 10_000),
    "Phoenix": ("Arizona", 6_000_000, 12_000, "Phoenix--Mesa, AZ", 4_000_000, 0.75, 10_500),
}

CLAIMS_HEADER = (
    "claim_id",
    "coverage",
    "occurrence_date",
    "zip_code",
    "region",
    "source",
    "liability_payment_expected",
    "mode",
    "mode_override",
)


def _field(value: object) -> str:
    text = "" if value is None else str(value)
    return f'"{text}"' if "," in text else text


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    lines = [",".join(header)]
    lines.extend(",".join(_field(v) for v in row) for row in rows)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def fleet_claim_rows() -> list[list[object]]:
    rows: list[list[object]] = []
    for (mode, coverage), count in FLEET_COUNTS.items():
        region = "SanFrancisco" if mode != "RO" else "Phoenix"
        for i in range(count):
            rows.append(
                [f"F-{mode}-{coverage}-{i:03d}", coverage, "2021-06-15", ZIPS[region][i % 2], region, "Fleet", "true", mode, ""]
            )
    # Not expected to resolve with a payment, so never counted.
    rows.append(["F-TO-PD-np", "PD", "2022-03-01", "94103", "SanFrancisco", "Fleet", "false", "TO", ""])
    return rows


def human_claim_rows() -> list[list[object]]:
    rows: list[list[object]] = []
    for (region, coverage), count in HUMAN_COUNTS.items():
        for i in range(count):
            year = HUMAN_YEARS[i % 2]
            rows.append(
                [f"H-{region}-{coverage}-{i:03d}", coverage, f"{year}-05-10", ZIPS[region][i % 2], region, "HumanBaseline", "true", "", ""]
            )
        rows.append(
            [f"H-{region}-{coverage}-out", coverage, "2019-07-01", OUTSIDE_ZIPS[region], region, "HumanBaseline", "true", "", ""]
        )
        rows.append(
            [f"H-{region}-{coverage}-np", coverage, "2020-07-01", ZIPS[region][0], region, "HumanBaseline", "false", "", ""]
        )
    return rows


def exposure_rows() -> list[list[object]]:
    rows: list[list[object]] = []
    for region, zips in ZIPS.items():
        for year in HUMAN_YEARS:
            for zip_code in zips:
                rows.append([region, zip_code, year, POLICY_YEARS_PER_ZIP[region]])
            rows.append([region, OUTSIDE_ZIPS[region], year, 1000.0])
    return rows


def vmt_rows(drop: tuple[str, int] | None = None) -> list[list[object]]:
    rows: list[list[object]] = []
    for region, (state, vehicles, state_vmt, urban, population, per_capita, urban_vmt) in VMT_SOURCES.items():
        for year in HUMAN_YEARS:
            if drop == (region, year):
                continue
            monthly = vehicles * state_vmt / 12
            for month in range(1, 13):
                rows.append(["State", state, year, month, monthly, vehicles, "", ""])
            rows.append(["UrbanizedArea", urban, year, "", population * per_capita * urban_vmt, "", population, per_capita])
    return rows


def build_inputs(
    directory: Path,
    *,
    drop_vmt: tuple[str, int] | None = None,
    extra_claims: Sequence[Sequence[object]] = (),
) -> Path:
    """Write the five input tables; the fleet part reproduces the published counts and miles."""
    write_csv(directory / "claims.csv", CLAIMS_HEADER, [*fleet_claim_rows(), *human_claim_rows(), *extra_claims])
    write_csv(directory / "exposure.csv", ("region", "zip_code", "coverage_year", "policy_years"), exposure_rows())
    write_csv(
        directory / "mileage.csv",
        ("region", "mode", "miles"),
        [[region, mode, miles] for (region, mode), miles in FLEET_MILES.items()],
    )
    write_csv(
        directory / "zips.csv",
        ("region", "zip_code"),
        [[region, z] for region, zips in ZIPS.items() for z in zips],
    )
    write_csv(
        directory / "vmt_inputs.csv",
        (
            "region_scope",
            "region_name",
            "year",
            "month",
            "total_vmt_miles",
            "registered_vehicles",
            "population",
            "vehicles_per_capita",
        ),
        vmt_rows(drop_vmt),
    )
    return directory


def write_curated_baseline(path: Path) -> Path:
    return write_csv(
        path,
        ("category", "coverage", "confidence", "rate_cpmm", "ci_low", "ci_high"),
        [[cat, cov, 0.95, *values] for (cat, cov), values in CURATED_BASELINES.items()],
    )


@pytest.fixture
def inputs_dir(tmp_path: Path) -> Path:
    """Complete, valid input directory."""
    return build_inputs(tmp_path / "inputs")


@pytest.fixture
def curated_baseline(tmp_path: Path) -> Path:
    """Curated baseline.csv holding the published baselines."""
    return write_curated_baseline(tmp_path / "curated_baseline.csv")


@pytest.fixture
def sim_config_payload() -> dict[str, object]:
    """Two regions, SF 3.5 / PHX 2.5 cpmm PD, fleet miles in both."""
    return {
        "seed": 7,
        "trials": 10_000,
        "regions": [
            {
                "name": "SanFrancisco",
                "zip_codes": ["94103", "94110"],
                "true_rate_cpmm": {"BI": 1.2, "PD": 3.5},
                "vmt_per_vehicle": {"2019": 11000, "2020": 10000},
                "exposure_mmi": 2000.0,
            },
            {
                "name": "Phoenix",
                "zip_codes": ["85004"],
                "true_rate_cpmm": {"BI": 0.8, "PD": 2.5},
                "vmt_per_vehicle": {"2019": 12000, "2020": 12000},
                "policy_years": {"2019": 100000, "2020": 100000},
            },
        ],
        "fleet": [
            {"mode": "Manual", "miles": {"SanFrancisco": 3_000_000, "Phoenix": 1_000_000}, "true_rate_cpmm": {"BI": 1.0, "PD": 3.0}},
            {"mode": "TO", "miles": {"SanFrancisco": 5_000_000, "Phoenix": 5_000_000}, "true_rate_cpmm": {"BI": 0.1, "PD": 0.2}},
            {"mode": "RO", "miles": {"SanFrancisco": 2_000_000}, "true_rate_cpmm": {"BI": 0.0, "PD": 0.5}},
        ],
        "coverage_lambdas": [3.0],
    }


@pytest.fixture
def sim_config_file(tmp_path: Path, sim_config_payload: dict[str, object]) -> Path:
    path = tmp_path / "simconfig.json"
    path.write_text(json.dumps(sim_config_payload), encoding="utf-8")
    return path
