"""Statistics core: exact and normal rate intervals, mixing, significance."""

from src.stats.gamma import inverse_regularized_lower_gamma, regularized_lower_gamma
from src.stats.intervals import (
    IntervalMethod,
    RateEstimate,
    SignificanceVerdict,
    mixture_standard_error,
    normal_rate_ci,
    percent_reduction,
    poisson_exact_rate_ci,
    significance,
)
from src.stats.rounding import format_percent, format_rate, round_half_up

__all__ = [
    "inverse_regularized_lower_gamma",
    "regularized_lower_gamma",
    "IntervalMethod",
    "RateEstimate",
    "SignificanceVerdict",
    "mixture_standard_error",
    "normal_rate_ci",
    "percent_reduction",
    "poisson_exact_rate_ci",
    "significance",
    "format_percent",
    "format_rate",
    "round_half_up",
]
