"""Tests for the command-line interface."""

import json
import os
from collections.abc import Iterator
from pathlib import Path
from unittest.mock import patch

import pytest
import structlog
from click.testing import CliRunner, Result

from src import __version__
from src.baseline import read_baseline_csv
from src.cli import main
from src.core.tables import read_table
from tests.conftest import CLAIMS_HEADER, build_inputs


@pytest.fixture(autouse=True)
def clean_env() -> Iterator[None]:
    """No CLAIMSBENCH_* variables leak in; logging is reset after each run."""
    with patch.dict(os.environ, {}, clear=True):
        yield
    structlog.reset_defaults()


def run(*args: str | Path) -> Result:
    return CliRunner().invoke(main, [str(a) for a in args])


def comment_lines(path: Path) -> list[str]:
    return [line for line in path.read_text(encoding="utf-8").splitlines() if line.startswith("#")]


def test_validate_clean_inputs(inputs_dir: Path, tmp_path: Path) -> None:
    """Test that a clean fixture validates with exit 0 and lists the tables."""
    result = run("validate", "--inputs", inputs_dir, "--out", tmp_path / "out")

    assert result.exit_code == 0, result.output
    assert "claims" in result.output
    assert "VMT region-years: 4" in result.output


def test_validate_bad_zip(tmp_path: Path) -> None:
    """Test that a 4-digit zip exits 3 with a row pointer."""
    bad_row = ["F-bad", "PD", "2021-06-15", "1234", "SanFrancisco", "Fleet", "true", "TO", ""]
    inputs = build_inputs(tmp_path / "inputs", extra_claims=[bad_row])
    assert len(bad_row) == len(CLAIMS_HEADER)

    result = run("validate", "--inputs", inputs)

    assert result.exit_code == 3
    assert "row" in result.output
    assert "ingestion" in result.output


def test_validate_missing_vmt_year(tmp_path: Path) -> None:
    """Test that a missing VMT year exits 3 naming the year."""
    inputs = build_inputs(tmp_path / "inputs", drop_vmt=("Phoenix", 2020))

    result = run("validate", "--inputs", inputs)

    assert result.exit_code == 3
    assert "2020" in result.output
    assert "vmt" in result.output


def test_missing_table_is_schema_error(inputs_dir: Path) -> None:
    """Test that an absent input table exits 2."""
    (inputs_dir / "zips.csv").unlink()

    result = run("validate", "--inputs", inputs_dir)

    assert result.exit_code == 2


def test_validate_row_with_extra_field(tmp_path: Path) -> None:
    """Test that a CSV row with too many fields exits 3 naming the table."""
    extra = ["F-bad", "PD", "2021-06-15", "94103", "SanFrancisco", "Fleet", "true", "TO", "", "surplus"]
    inputs = build_inputs(tmp_path / "inputs", extra_claims=[extra])

    result = run("validate", "--inputs", inputs)

    assert result.exit_code == 3
    assert "claims.csv" in result.output
    assert "fields" in result.output


def test_validate_table_not_utf8(inputs_dir: Path) -> None:
    """Test that undecodable bytes in a table exit 2."""
    zips = inputs_dir / "zips.csv"
    zips.write_bytes(zips.read_bytes() + b"Phoenix,85\xff04\n")

    result = run("validate", "--inputs", inputs_dir)

    assert result.exit_code == 2
    assert "UTF-8" in result.output


@pytest.mark.parametrize("content", ["42", b"[\xff]"])
def test_validate_unreadable_traces(inputs_dir: Path, content: str | bytes) -> None:
    """Test that a traces.json that is not a list of objects or not UTF-8 exits 2."""
    path = inputs_dir / "traces.json"
    if isinstance(content, bytes):
        path.write_bytes(content)
    else:
        path.write_text(content, encoding="utf-8")

    result = run("validate", "--inputs", inputs_dir)

    assert result.exit_code == 2
    assert "traces.json" in result.output


def test_validate_trace_mixing_offsets(inputs_dir: Path) -> None:
    """Test that a trace mixing offset-aware and naive timestamps exits 3."""
    payload = [
        {
            "claim_id": "F-Manual-PD-000",
            "intervals": [["2021-06-15T10:00:00Z", "2021-06-15T10:00:58Z"]],
            "human_in_driver_seat": True,
            "impact_time": "2021-06-15T10:01:00",
        }
    ]
    (inputs_dir / "traces.json").write_text(json.dumps(payload), encoding="utf-8")

    result = run("validate", "--inputs", inputs_dir)

    assert result.exit_code == 3
    assert "mixes" in result.output


def test_json_logs_from_environment(inputs_dir: Path) -> None:
    """Test that CLAIMSBENCH_LOG_FORMAT=json emits JSON events tagged with their stage."""
    with patch.dict(os.environ, {"CLAIMSBENCH_LOG_FORMAT": "json"}):
        result = run("validate", "--inputs", inputs_dir)

    assert result.exit_code == 0, result.output
    assert '"event": "inputs_loaded"' in result.output
    assert '"stage": "ingestion"' in result.output


def test_compare_with_curated_baseline_is_idempotent(
    inputs_dir: Path,
    curated_baseline: Path,
    tmp_path: Path,
) -> None:
    """Test that two runs on identical inputs write byte-identical outputs."""
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        result = run("compare", "--inputs", inputs_dir, "--out", out, "--baseline", curated_baseline)
        assert result.exit_code == 0, result.output
        outputs.append(((out / "comparison.csv").read_bytes(), (out / "report.json").read_bytes()))

    assert outputs[0] == outputs[1]
    frame = read_table(tmp_path / "first" / "comparison.csv")
    assert list(frame["verdict"]) == ["NS", "S", "S", "S", "S", "S", "S", "S"]


def test_urban_selection_raises_baselines(inputs_dir: Path, tmp_path: Path) -> None:
    """Test that forcing urban VMT on this fixture gives strictly higher baselines."""
    auto = run("baseline", "--inputs", inputs_dir, "--out", tmp_path / "auto")
    urban = run("baseline", "--inputs", inputs_dir, "--out", tmp_path / "urban", "--vmt-selection", "urban")
    assert auto.exit_code == 0, auto.output
    assert urban.exit_code == 0, urban.output

    low = read_baseline_csv(tmp_path / "auto" / "baseline.csv")
    high = read_baseline_csv(tmp_path / "urban" / "baseline.csv")
    for key, result in low.items():
        assert high[key].estimate.rate_cpmm > result.estimate.rate_cpmm


def test_vmt_command(inputs_dir: Path, tmp_path: Path) -> None:
    """Test that vmt writes vmt.csv under --out."""
    result = run("vmt", "--inputs", inputs_dir, "--out", tmp_path / "out", "--vmt-selection", "state")

    assert result.exit_code == 0, result.output
    frame = read_table(tmp_path / "out" / "vmt.csv")
    assert set(frame["selection"]) == {"state"}


def test_invalid_confidence_exits_2(inputs_dir: Path) -> None:
    """Test that configuration errors exit 2."""
    result = run("compare", "--inputs", inputs_dir, "--confidence", "1.5")

    assert result.exit_code == 2


def test_simulate_compare_report(sim_config_file: Path, tmp_path: Path) -> None:
    """Test simulate, then compare on the synthetic inputs, then report."""
    inputs = tmp_path / "sim"
    out = tmp_path / "out"

    simulated = run("simulate", "--config", sim_config_file, "--inputs", inputs, "--out", out)
    assert simulated.exit_code == 0, simulated.output
    assert (inputs / "claims.csv").is_file()
    header = comment_lines(out / "coverage.csv")
    assert header[0] == f"# tool_version: {__version__}"
    assert header[1].startswith("# config_digest: ")
    assert any(line.startswith("# input claims.csv: ") for line in header)
    assert header[-1] == "# seed: 7"

    compared = run("compare", "--inputs", inputs, "--out", out)
    assert compared.exit_code == 0, compared.output
    assert (out / "baseline.csv").is_file()
    assert (out / "vmt.csv").is_file()

    reported = run("report", "--out", out)
    assert reported.exit_code == 0, reported.output
    figure = read_table(out / "figure.csv")
    assert set(figure["series"]) == {"Fleet", "Baseline"}
    assert len(figure) == 16


def test_simulate_seed_flag_overrides_config(sim_config_file: Path, tmp_path: Path) -> None:
    """Test that --seed replaces the simconfig seed."""
    out = tmp_path / "out"
    result = run(
        "simulate", "--config", sim_config_file, "--inputs", tmp_path / "sim", "--out", out, "--seed", "99"
    )

    assert result.exit_code == 0, result.output
    assert comment_lines(out / "coverage.csv")[-1] == "# seed: 99"


def test_simulate_bad_config(tmp_path: Path) -> None:
    """Test that an invalid simconfig exits 2."""
    config = tmp_path / "simconfig.json"
    config.write_text('{"regions": []}', encoding="utf-8")

    result = run("simulate", "--config", config, "--inputs", tmp_path / "sim", "--no-coverage")

    assert result.exit_code == 2


def test_report_without_report_file(tmp_path: Path) -> None:
    """Test that report on an empty output directory exits 2."""
    result = run("report", "--out", tmp_path / "empty")

    assert result.exit_code == 2
    assert "report" in result.output


def test_version() -> None:
    """Test the version command."""
    result = run("version")

    assert result.exit_code == 0
    assert f"claimsbench version {__version__}" in result.output


def test_config_command() -> None:
    """Test that config shows the resolved settings."""
    result = run("config", "--confidence", "0.9")

    assert result.exit_code == 0, result.output
    assert "0.9" in result.output
    assert "Confidence" in result.output
