"""Logging configuration for the claims benchmarking toolkit.

All events go to stderr so that stdout carries only report tables. Library
modules log through ``structlog.get_logger()`` and bind their own context;
the pipeline adds ``stage`` through contextvars.
"""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from typing import Any

import structlog
from structlog.types import EventDict, Processor, WrappedLogger


def _enum_values(_: WrappedLogger, __: str, event_dict: EventDict) -> EventDict:
    # Region.PHOENIX -> "Phoenix" in both renderers
    for key, value in event_dict.items():
        if isinstance(value, Enum):
            event_dict[key] = value.value
    return event_dict


def _renderer(log_format: str) -> Processor:
    if log_format.lower() == "json":
        return structlog.processors.JSONRenderer(sort_keys=True)
    return structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())


def setup_logging(level: str = "INFO", log_format: str = "text") -> None:
    """
    Configure structured logging for the application.

    Loggers are not cached: each call rebinds output to the current
    ``sys.stderr``, which matters when the CLI runs repeatedly in one process.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_format: Output format ('json' or 'text')
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        _enum_values,
        structlog.processors.StackInfoRenderer(),
        structlog.dev.set_exc_info,
        structlog.processors.TimeStamper(fmt="iso"),
        _renderer(log_format),
    ]

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )

    # numpy/scipy warnings routed through the stdlib logger end up on stderr too
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=numeric_level)
    logging.captureWarnings(True)


@contextmanager
def bound_stage(stage: str, **context: Any) -> Iterator[None]:
    """Tag every log event emitted inside the block with the pipeline stage."""
    with structlog.contextvars.bound_contextvars(stage=stage, **context):
        yield
