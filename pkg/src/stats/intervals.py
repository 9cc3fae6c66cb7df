"""Rate estimates, confidence intervals and CI-overlap significance."""

import math
from collections.abc import Sequence
from enum import Enum

import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import stats

from src.core.exceptions import (
    BaselineZeroError,
    ConfidenceMismatchError,
    WeightSumInvalidError,
)
from src.stats.gamma import inverse_regularized_lower_gamma

logger = structlog.get_logger()

WEIGHT_SUM_TOLERANCE = 1e-9
# Relative slack for the rate = count / exposure consistency check.
_RATE_RTOL = 1e-9


class IntervalMethod(str, Enum):
    """How an interval was constructed."""

    POISSON_EXACT = "PoissonExact"
    NORMAL_APPROX = "NormalApprox"


class SignificanceVerdict(str, Enum):
    """CI-overlap decision."""

    SIGNIFICANT = "S"
    NOT_SIGNIFICANT = "NS"


class RateEstimate(BaseModel):
    """A claims-per-million-miles estimate with its confidence interval."""

    model_config = ConfigDict(frozen=True)

    rate_cpmm: float = Field(ge=0.0)
    ci_low_cpmm: float = Field(ge=0.0)
    ci_high_cpmm: float = Field(ge=0.0)
    confidence: float = Field(default=0.95, gt=0.0, lt=1.0)
    method: IntervalMethod
    claim_count: int | None = Field(default=None, ge=0)
    exposure_mmi: float | None = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def check_invariants(self) -> "RateEstimate":
        if not self.ci_low_cpmm <= self.rate_cpmm <= self.ci_high_cpmm:
            raise ValueError(
                f"interval [{self.ci_low_cpmm}, {self.ci_high_cpmm}] does not contain {self.rate_cpmm}"
            )
        if self.claim_count is not None and self.exposure_mmi is not None:
            expected = self.claim_count / self.exposure_mmi
            if not math.isclose(self.rate_cpmm, expected, rel_tol=_RATE_RTOL, abs_tol=1e-15):
                raise ValueError(f"rate {self.rate_cpmm} != claim_count / exposure_mmi = {expected}")
        if self.claim_count == 0 and self.ci_low_cpmm != 0.0:
            raise ValueError("zero claims require a zero lower bound")
        return self

    @property
    def width(self) -> float:
        return self.ci_high_cpmm - self.ci_low_cpmm


def poisson_exact_rate_ci(
    claim_count: int,
    exposure_mmi: float,
    confidence: float = 0.95,
) -> RateEstimate:
    """
    Garwood exact interval for a Poisson rate.

    The expected-count bounds are gamma quantiles (equivalently chi-square
    quantiles with 2k and 2k+2 degrees of freedom, halved); both are divided
    by the exposure to give cpmm.

    Args:
        claim_count: Observed claims, k >= 0
        exposure_mmi: Exposure in millions of miles, > 0
        confidence: Two-sided confidence level

    Returns:
        RateEstimate with method PoissonExact
    """
    if claim_count < 0:
        raise ValueError(f"claim_count must be non-negative, got {claim_count}")
    if not exposure_mmi > 0:
        raise ValueError(f"exposure_mmi must be positive, got {exposure_mmi}")

    alpha = 1.0 - confidence
    lower_count = 0.0 if claim_count == 0 else inverse_regularized_lower_gamma(claim_count, alpha / 2)
    upper_count = inverse_regularized_lower_gamma(claim_count + 1, 1.0 - alpha / 2)

    return RateEstimate(
        rate_cpmm=claim_count / exposure_mmi,
        ci_low_cpmm=lower_count / exposure_mmi,
        ci_high_cpmm=upper_count / exposure_mmi,
        confidence=confidence,
        method=IntervalMethod.POISSON_EXACT,
        claim_count=claim_count,
        exposure_mmi=exposure_mmi,
    )


def z_value(confidence: float) -> float:
    """Two-sided standard-normal quantile."""
    return float(stats.norm.ppf(1.0 - (1.0 - confidence) / 2))


def normal_rate_ci(
    rate_cpmm: float,
    standard_error_cpmm: float,
    confidence: float = 0.95,
    claim_count: int | None = None,
    exposure_mmi: float | None = None,
) -> RateEstimate:
    """Normal-approximation interval rate +/- z*SE, lower bound clamped at zero."""
    if standard_error_cpmm < 0:
        raise ValueError(f"standard error must be non-negative, got {standard_error_cpmm}")

    half_width = z_value(confidence) * standard_error_cpmm
    return RateEstimate(
        rate_cpmm=rate_cpmm,
        ci_low_cpmm=max(0.0, rate_cpmm - half_width),
        ci_high_cpmm=rate_cpmm + half_width,
        confidence=confidence,
        method=IntervalMethod.NORMAL_APPROX,
        claim_count=claim_count,
        exposure_mmi=exposure_mmi,
    )


def check_weights(weights: Sequence[float]) -> None:
    """Weights must be non-negative and sum to one."""
    if any(w < 0 for w in weights):
        raise WeightSumInvalidError("Mixture weights must be non-negative", details={"weights": list(weights)})
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise WeightSumInvalidError(
            f"Mixture weights sum to {total}, expected 1",
            details={"weights": list(weights)},
        )


def mixture_standard_error(
    weights: Sequence[float],
    per_region_rates: Sequence[float],
    per_region_exposure_mmi: Sequence[float],
) -> float:
    """
    Standard error of a weighted sum of independent regional Poisson rates.

    Each regional rate f_r estimated from E_r million miles has variance
    f_r / E_r; the mixture variance is sum(w_r^2 * f_r / E_r).
    """
    if not len(weights) == len(per_region_rates) == len(per_region_exposure_mmi):
        raise ValueError("weights, rates and exposures must have equal length")
    check_weights(weights)
    if any(e <= 0 for e in per_region_exposure_mmi):
        raise ValueError("regional exposures must be positive")

    variance = math.fsum(
        w * w * f / e for w, f, e in zip(weights, per_region_rates, per_region_exposure_mmi)
    )
    return math.sqrt(variance)


def percent_reduction(fleet_rate: float, baseline_rate: float) -> float:
    """100 * (1 - fleet/baseline) on unrounded rates."""
    if baseline_rate <= 0:
        raise BaselineZeroError(
            "Percent reduction is undefined against a zero baseline",
            details={"fleet_rate": fleet_rate, "baseline_rate": baseline_rate},
        )
    return 100.0 * (1.0 - fleet_rate / baseline_rate)


def significance(a: RateEstimate, b: RateEstimate) -> SignificanceVerdict:
    """Significant iff the two intervals are disjoint; a shared endpoint counts as overlap."""
    if not math.isclose(a.confidence, b.confidence, rel_tol=0.0, abs_tol=1e-12):
        raise ConfidenceMismatchError(
            "Cannot compare intervals at different confidence levels",
            details={"a": a.confidence, "b": b.confidence},
        )
    if a.ci_high_cpmm < b.ci_low_cpmm or b.ci_high_cpmm < a.ci_low_cpmm:
        return SignificanceVerdict.SIGNIFICANT
    return SignificanceVerdict.NOT_SIGNIFICANT
