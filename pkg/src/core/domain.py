"""Shared domain enumerations."""

from enum import Enum


class Region(str, Enum):
    """Fleet operating regions."""

    SAN_FRANCISCO = "SanFrancisco"
    PHOENIX = "Phoenix"


class Coverage(str, Enum):
    """Third-party liability coverages."""

    BODILY_INJURY = "BI"
    PROPERTY_DAMAGE = "PD"


class ClaimSource(str, Enum):
    """Population a claim belongs to."""

    FLEET = "Fleet"
    HUMAN_BASELINE = "HumanBaseline"


class DrivingMode(str, Enum):
    """Driving mode stored on a fleet claim or mileage row."""

    MANUAL = "Manual"
    TO = "TO"
    RO = "RO"


class MileageCategory(str, Enum):
    """Reporting category; TO+RO aggregates two stored modes."""

    MANUAL = "Manual"
    TO = "TO"
    RO = "RO"
    TO_PLUS_RO = "TO+RO"

    @property
    def modes(self) -> tuple[DrivingMode, ...]:
        """Stored driving modes that make up this category."""
        if self is MileageCategory.TO_PLUS_RO:
            return (DrivingMode.TO, DrivingMode.RO)
        return (DrivingMode(self.value),)


class VmtSelection(str, Enum):
    """Rule for choosing between the state and urbanized-area VMT estimates."""

    AUTO = "auto"
    STATE = "state"
    URBAN = "urban"


CATEGORY_ORDER: tuple[MileageCategory, ...] = tuple(MileageCategory)
COVERAGE_ORDER: tuple[Coverage, ...] = tuple(Coverage)
