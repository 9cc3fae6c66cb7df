"""Display rounding. Computation always works on unrounded values."""

from decimal import ROUND_HALF_UP, Decimal


def round_half_up(value: float, places: int = 2) -> Decimal:
    """Round the shortest decimal form of ``value`` half-up to ``places`` digits."""
    quantum = Decimal(1).scaleb(-places)
    return Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)


def format_rate(value: float) -> str:
    """cpmm and CI bounds: two decimals."""
    return f"{round_half_up(value, 2)}"


def format_percent(value: float) -> str:
    """Percent reductions: nearest integer."""
    return f"{round_half_up(value, 0):.0f}%"
