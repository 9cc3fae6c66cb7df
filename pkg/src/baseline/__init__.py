"""Human-driver baselines calibrated to fleet mileage and zip codes."""

from src.baseline.builder import (
    BaselineBuilder,
    BaselineKey,
    BaselineResult,
    MileageMix,
    RegionFrequency,
    build_baselines,
    exposure_miles,
    mileage_mix,
    mix_baseline,
    region_frequency,
)
from src.baseline.table import read_baseline_csv, write_baseline_csv

__all__ = [
    "BaselineBuilder",
    "BaselineKey",
    "BaselineResult",
    "MileageMix",
    "RegionFrequency",
    "build_baselines",
    "exposure_miles",
    "mileage_mix",
    "mix_baseline",
    "region_frequency",
    "read_baseline_csv",
    "write_baseline_csv",
]
