"""CLI interface for the claims benchmarking toolkit."""

import sys
from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any, TypeVar

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from src.compare import render_table, report_summary
from src.core.config import Settings, load_settings
from src.core.exceptions import ClaimsBenchError
from src.core.logging import setup_logging
from src.pipeline import PipelineRunner
from src.simulator import SimConfig

console = Console()
err_console = Console(stderr=True)

F = TypeVar("F", bound=Callable[..., Any])


def run_options(func: F) -> F:
    """Flags shared by every pipeline command; unset flags defer to config and environment."""
    options = [
        click.option("--inputs", "inputs_dir", type=click.Path(path_type=Path), help="Input tables directory"),
        click.option("--out", "output_dir", type=click.Path(path_type=Path), help="Output directory"),
        click.option("--confidence", type=float, help="Two-sided confidence level (default: 0.95)"),
        click.option(
            "--vmt-selection",
            type=click.Choice(["auto", "state", "urban"]),
            help="VMT per vehicle rule (default: auto, the conservative estimate)",
        ),
        click.option("--strict", "strict_mode", is_flag=True, help="Fail on empty fleet cells"),
        click.option("--seed", type=int, help="Master seed for simulations"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_settings(**flags: Any) -> Settings:
    """Settings with flags layered over environment and `CLAIMSBENCH_CONFIG`."""
    if not flags.get("strict_mode"):
        flags["strict_mode"] = None
    return load_settings(**flags)


def handle_errors(func: F) -> F:
    """Print toolkit errors with their stage and exit with the error's code."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except ClaimsBenchError as e:
            where = f" in stage [bold]{e.stage}[/bold]" if e.stage else ""
            err_console.print(f"[bold red]Error{where}:[/bold red] {e.message}")
            if e.details:
                err_console.print(f"[dim]Details: {e.details}[/dim]")
            sys.exit(e.exit_code)

    return wrapper  # type: ignore[return-value]


@click.group()
@click.option(
    "--log-level",
    default="INFO",
    envvar="CLAIMSBENCH_LOG_LEVEL",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Logging level",
)
@click.option(
    "--log-format",
    default="text",
    envvar="CLAIMSBENCH_LOG_FORMAT",
    type=click.Choice(["text", "json"], case_sensitive=False),
    help="Log output format",
)
@click.pass_context
def main(ctx: click.Context, log_level: str, log_format: str) -> None:
    """claimsbench - liability claims per million miles benchmarking."""
    setup_logging(level=log_level, log_format=log_format)
    ctx.ensure_object(dict)
    ctx.obj["log_level"] = log_level


@main.command()
@run_options
@handle_errors
def validate(**flags: Any) -> None:
    """Parse and check all input tables."""
    runner = PipelineRunner(build_settings(**flags))
    report = runner.validate()

    table = Table(title="Input tables")
    table.add_column("Table", style="cyan")
    table.add_column("File", style="white")
    table.add_column("Summary", style="green")
    for row in report.rows():
        summary = ", ".join(f"{k}={v}" for k, v in row.items() if k not in ("table", "path"))
        table.add_row(row["table"], Path(row["path"]).name, summary)
    console.print(table)
    console.print(f"Engagement traces: {report.traces}")
    console.print(f"VMT region-years: {report.vmt_region_years}")
    console.print("[bold green]✅ Inputs valid[/bold green]")


@main.command()
@run_options
@handle_errors
def vmt(**flags: Any) -> None:
    """Estimate VMT per vehicle and write vmt.csv."""
    path = PipelineRunner(build_settings(**flags)).run_vmt()
    console.print(f"[green]✅ Wrote {path}[/green]")


@main.command()
@run_options
@handle_errors
def baseline(**flags: Any) -> None:
    """Build the human baselines and write baseline.csv."""
    path = PipelineRunner(build_settings(**flags)).run_baseline()
    console.print(f"[green]✅ Wrote {path}[/green]")


@main.command()
@run_options
@click.option(
    "--baseline",
    "baseline_file",
    type=click.Path(path_type=Path, exists=True, dir_okay=False),
    help="Use this baseline.csv instead of computing baselines",
)
@handle_errors
def compare(baseline_file: Path | None, **flags: Any) -> None:
    """Compare fleet rates with baselines; writes comparison.csv and report.json."""
    report = PipelineRunner(build_settings(**flags)).run_compare(baseline_file)
    console.print(render_table(report))
    summary = report_summary(report)
    console.print(
        f"[dim]{summary['compared']} of {summary['cells']} cells compared, "
        f"{summary['significant']} significant[/dim]"
    )


@main.command()
@run_options
@click.option(
    "--config",
    "sim_config",
    required=True,
    type=click.Path(path_type=Path, dir_okay=False),
    help="Simulation config (JSON)",
)
@click.option("--no-coverage", is_flag=True, help="Skip the interval coverage experiments")
@handle_errors
def simulate(sim_config: Path, no_coverage: bool, **flags: Any) -> None:
    """Write a synthetic dataset to --inputs and coverage.csv to --out."""
    config = SimConfig.from_file(sim_config)
    if flags.get("seed") is not None:
        config = config.model_copy(update={"seed": flags["seed"]})

    runner = PipelineRunner(build_settings(**flags))
    with console.status("[bold green]Simulating..."):
        outcome = runner.run_simulate(config, with_coverage=not no_coverage)

    for schema, path in outcome.tables.items():
        console.print(f"  {schema.value}: {path}")
    if outcome.coverage_path:
        console.print(f"[green]✅ Coverage summary: {outcome.coverage_path}[/green]")


@main.command()
@run_options
@click.option(
    "--report",
    "report_path",
    type=click.Path(path_type=Path, dir_okay=False),
    help="report.json to render (default: <out>/report.json)",
)
@handle_errors
def report(report_path: Path | None, **flags: Any) -> None:
    """Re-render report.json and write figure.csv."""
    loaded = PipelineRunner(build_settings(**flags)).run_report(report_path)
    console.print(render_table(loaded))
    console.print(f"[dim]config_digest {loaded.provenance.config_digest[:12]}, tool {loaded.provenance.tool_version}[/dim]")


@main.command()
def version() -> None:
    """Show version information."""
    from src import __version__

    console.print(f"claimsbench version {__version__}")


@main.command()
@run_options
@handle_errors
def config(**flags: Any) -> None:
    """Show the resolved configuration."""
    settings = build_settings(**flags)

    table = Table(title="Current Configuration")
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Inputs", str(settings.inputs_dir))
    table.add_row("Output", str(settings.output_dir))
    table.add_row("Confidence", str(settings.confidence))
    table.add_row("VMT selection", settings.vmt_selection.value)
    table.add_row("Strict mode", "✅ Enabled" if settings.strict_mode else "❌ Disabled")
    table.add_row("Seed", str(settings.seed))
    table.add_row("Human window", f"{settings.human_window_start} .. {settings.human_window_end}")
    table.add_row("Fleet window", f"{settings.fleet_window_start} .. {settings.fleet_window_end}")
    for region, source in settings.region_vmt_sources.items():
        table.add_row(f"VMT sources {region.value}", f"{source.state} / {source.urbanized_area}")
    table.add_row("Config digest", settings.digest())

    console.print(Panel(table, title="claimsbench", border_style="cyan"))


if __name__ == "__main__":
    main()
