"""Synthetic-data oracle for intervals, mixing and the end-to-end pipeline."""

from src.simulator.config import SimConfig, SimFleetMode, SimRegion
from src.simulator.generator import DatasetSimulator, simulate_claims, true_mixed_rate
from src.simulator.sampling import (
    CoverageResult,
    coverage_experiment,
    coverage_suite,
    draw_poisson_counts,
    exact_coverage,
    write_coverage_csv,
)

__all__ = [
    "SimConfig",
    "SimFleetMode",
    "SimRegion",
    "DatasetSimulator",
    "simulate_claims",
    "true_mixed_rate",
    "CoverageResult",
    "coverage_experiment",
    "coverage_suite",
    "draw_poisson_counts",
    "exact_coverage",
    "write_coverage_csv",
]
