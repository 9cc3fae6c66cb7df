"""Claims frequency benchmarking of an autonomous fleet against calibrated human baselines."""

__version__ = "0.1.0"
