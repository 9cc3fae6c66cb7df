"""Vehicle-miles-traveled per vehicle estimation."""

from src.vmt.estimator import (
    AnnualVmt,
    VmtEstimate,
    VmtEstimator,
    aggregate_vmt_rows,
    estimate_vmt,
    select_conservative,
    vmt_per_vehicle_state,
    vmt_per_vehicle_urban,
    write_vmt_csv,
)

__all__ = [
    "AnnualVmt",
    "VmtEstimate",
    "VmtEstimator",
    "aggregate_vmt_rows",
    "estimate_vmt",
    "select_conservative",
    "vmt_per_vehicle_state",
    "vmt_per_vehicle_urban",
    "write_vmt_csv",
]
