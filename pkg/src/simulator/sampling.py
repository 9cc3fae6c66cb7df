"""Seeded Poisson sampling and interval coverage experiments."""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
import pandas as pd
import structlog
from scipy import stats

from src.core.tables import write_table
from src.stats.intervals import poisson_exact_rate_ci

logger = structlog.get_logger()

MIN_TRIALS = 10_000
CHUNK_SIZE = 10_000
# Upper tail mass ignored when summing exact coverage.
_TAIL = 1e-15

SeedLike = int | Sequence[int] | np.random.SeedSequence | np.random.Generator


def draw_poisson_counts(
    rate_cpmm: float,
    exposure_mmi: float,
    size: int,
    seed: SeedLike,
) -> np.ndarray:
    """
    Poisson(rate x exposure) counts by inversion of uniform draws.

    Args:
        rate_cpmm: True frequency, >= 0
        exposure_mmi: Exposure in millions of miles, >= 0
        size: Number of draws
        seed: Anything ``numpy.random.default_rng`` accepts

    Returns:
        int64 array of length ``size``
    """
    if rate_cpmm < 0 or exposure_mmi < 0:
        raise ValueError("rate and exposure must be non-negative")
    rng = np.random.default_rng(seed)
    lam = rate_cpmm * exposure_mmi
    uniforms = rng.random(size)
    if lam == 0:
        return np.zeros(size, dtype=np.int64)
    # ppf(0) is -1 for discrete distributions.
    counts = stats.poisson.ppf(uniforms, lam)
    return np.maximum(counts, 0).astype(np.int64)


@dataclass(frozen=True)
class CoverageResult:
    """Monte-Carlo and exact coverage of the exact interval for one lambda."""

    lam: float
    trials: int
    covered: int
    confidence: float
    exact: float

    @property
    def empirical(self) -> float:
        return self.covered / self.trials


def _covers(true_rate: float, exposure_mmi: float, confidence: float) -> Callable[[int], bool]:
    @lru_cache(maxsize=None)
    def covers(k: int) -> bool:
        estimate = poisson_exact_rate_ci(k, exposure_mmi, confidence)
        return estimate.ci_low_cpmm <= true_rate <= estimate.ci_high_cpmm

    return covers


def exact_coverage(true_rate: float, exposure_mmi: float, confidence: float = 0.95) -> float:
    """Sum of Poisson probabilities of the counts whose interval contains the true rate."""
    if exposure_mmi <= 0:
        raise ValueError("exposure_mmi must be positive")
    lam = true_rate * exposure_mmi
    if lam == 0:
        return 1.0
    covers = _covers(true_rate, exposure_mmi, confidence)
    k_max = int(stats.poisson.isf(_TAIL, lam)) + 1
    ks = np.arange(k_max + 1)
    mask = np.fromiter((covers(int(k)) for k in ks), dtype=bool, count=ks.size)
    return float(stats.poisson.pmf(ks[mask], lam).sum())


def coverage_experiment(
    true_rate: float,
    exposure_mmi: float,
    trials: int,
    confidence: float = 0.95,
    seed: int | Sequence[int] = 0,
    chunk_size: int = CHUNK_SIZE,
) -> CoverageResult:
    """
    Fraction of simulated datasets whose exact interval contains the true rate.

    Trials run in fixed-size chunks; chunk ``i`` draws from the ``i``-th child
    of ``SeedSequence(seed)``, so the result depends only on the seed.
    Intervals are computed once per distinct count.
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"coverage experiments need at least {MIN_TRIALS} trials, got {trials}")
    if exposure_mmi <= 0:
        raise ValueError("exposure_mmi must be positive")

    sizes = [chunk_size] * (trials // chunk_size)
    if trials % chunk_size:
        sizes.append(trials % chunk_size)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    covers = _covers(true_rate, exposure_mmi, confidence)

    covered = 0
    for size, child in zip(sizes, children):
        counts = draw_poisson_counts(true_rate, exposure_mmi, size, child)
        values, frequency = np.unique(counts, return_counts=True)
        covered += int(sum(int(n) for k, n in zip(values, frequency) if covers(int(k))))

    result = CoverageResult(
        lam=true_rate * exposure_mmi,
        trials=trials,
        covered=covered,
        confidence=confidence,
        exact=exact_coverage(true_rate, exposure_mmi, confidence),
    )
    logger.info(
        "coverage_experiment_done",
        lam=result.lam,
        trials=trials,
        empirical=result.empirical,
        exact=result.exact,
    )
    return result


def coverage_suite(
    lambdas: Sequence[float],
    trials: int,
    confidence: float = 0.95,
    seed: int = 0,
    exposure_mmi: float = 1.0,
) -> list[CoverageResult]:
    """One experiment per lambda, each seeded from ``(seed, index)``."""
    return [
        coverage_experiment(lam / exposure_mmi, exposure_mmi, trials, confidence, seed=[seed, index])
        for index, lam in enumerate(lambdas)
    ]


COVERAGE_COLUMNS = ("lambda", "trials", "confidence", "empirical", "exact")


def write_coverage_csv(
    results: Sequence[CoverageResult],
    path: Path,
    header_lines: Sequence[str] = (),
) -> Path:
    """Write `coverage.csv`."""
    frame = pd.DataFrame(
        [[repr(r.lam), r.trials, repr(r.confidence), repr(r.empirical), repr(r.exact)] for r in results],
        columns=list(COVERAGE_COLUMNS),
    )
    return write_table(frame, path, header_lines)
