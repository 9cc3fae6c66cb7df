"""Inverse of the regularized lower incomplete gamma function."""

import math

import structlog
from scipy import optimize, special

from src.core.exceptions import NoConvergenceError

logger = structlog.get_logger()

# Bisection stops once the bracket is narrower than this.
BRACKET_WIDTH = 1e-12
MAX_ITERATIONS = 200
# Times the initial upper bracket may be doubled if it does not straddle the root.
MAX_BRACKET_EXPANSIONS = 64


def regularized_lower_gamma(shape: float, x: float) -> float:
    """P(shape, x), the gamma CDF with unit scale."""
    return float(special.gammainc(shape, x))


def _upper_bracket(shape: float) -> float:
    return shape + 20.0 * math.sqrt(shape) + 20.0


def inverse_regularized_lower_gamma(shape: float, probability: float) -> float:
    """
    Solve P(shape, x) = probability for x by bracketed bisection.

    The CDF is strictly increasing in x, so the root in
    [0, shape + 20*sqrt(shape) + 20] is unique.

    Args:
        shape: Gamma shape parameter, > 0
        probability: Target CDF value in (0, 1)

    Returns:
        x with |P(shape, x) - probability| within the bisection tolerance

    Raises:
        ValueError: If inputs are outside their domains
        NoConvergenceError: If bisection hits its iteration cap
    """
    if not shape > 0:
        raise ValueError(f"shape must be positive, got {shape}")
    if not 0.0 < probability < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {probability}")

    def residual(x: float) -> float:
        return regularized_lower_gamma(shape, x) - probability

    low, high = 0.0, _upper_bracket(shape)
    expansions = 0
    while residual(high) < 0:
        if expansions >= MAX_BRACKET_EXPANSIONS:
            raise NoConvergenceError(
                "Could not bracket the gamma quantile",
                residual=residual(high),
                iterations=expansions,
                details={"shape": shape, "probability": probability},
            )
        low, high = high, high * 2.0
        expansions += 1

    root, result = optimize.bisect(
        residual,
        low,
        high,
        xtol=BRACKET_WIDTH,
        maxiter=MAX_ITERATIONS,
        full_output=True,
        disp=False,
    )
    if not result.converged:
        error = residual(root)
        logger.error(
            "gamma_inverse_not_converged",
            shape=shape,
            probability=probability,
            residual=error,
            iterations=result.iterations,
        )
        raise NoConvergenceError(
            f"Gamma inverse did not converge for shape={shape}, p={probability}",
            residual=error,
            iterations=result.iterations,
            details={"shape": shape, "probability": probability, "residual": error},
        )
    return float(root)
