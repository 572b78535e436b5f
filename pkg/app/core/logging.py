"""
Logging configuration for the extrinsic triples toolkit.
"""

import logging
import sys
from typing import Any, Dict, Optional

import structlog

from app.core.config import settings


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Configure structured logging for the toolkit."""

    renderer: Any
    if (fmt or settings.log_format) == "console":
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    else:
        renderer = structlog.processors.JSONRenderer()

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    # stdout carries report JSON
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, (level or settings.log_level).upper()),
        force=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


class RunLogger:
    """Logger for verification and construction runs."""

    def __init__(self, name: str, **context: Any):
        self.logger = get_logger(name).bind(**context)

    def log_build(self, build_data: Dict[str, Any]) -> None:
        """Log construction of an algebra or sampler."""
        self.logger.info("Object built", **build_data)

    def log_check(self, name: str, status: str, **detail: Any) -> None:
        """Log a single named check."""
        if status == "fail":
            self.logger.warning("Check failed", check=name, status=status, **detail)
        else:
            self.logger.debug("Check finished", check=name, status=status, **detail)

    def log_probe(self, probe_data: Dict[str, Any]) -> None:
        """Log a numeric probe result."""
        self.logger.debug("Probe evaluated", **probe_data)

    def log_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> None:
        """Log error with context."""
        self.logger.error(
            "Error occurred",
            error=str(error),
            error_type=type(error).__name__,
            **(context or {})
        )
