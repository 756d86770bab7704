"""
Logging configuration and utilities.

Console output goes to stderr so that evaluated values on stdout stay clean.
"""
import logging
import logging.handlers
import sys
from typing import Optional
from pathlib import Path

import structlog

from config.settings import get_settings, LogLevel

ROOT_LOGGER_NAME = "extensor_calc"


def build_structured_formatter() -> logging.Formatter:
    """
    Build a JSON formatter for stdlib log records.

    Extra fields passed through ``extra=`` end up as top-level keys.

    Returns:
        Formatter rendering one JSON object per record
    """
    return structlog.stdlib.ProcessorFormatter(
        processor=structlog.processors.JSONRenderer(sort_keys=True, default=str),
        foreign_pre_chain=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.ExtraAdder(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
        ],
    )


class ColoredConsoleFormatter(logging.Formatter):
    """Plain text records with the level name colored for terminals."""

    LEVEL_COLORS = {
        logging.DEBUG: "\033[36m",
        logging.INFO: "\033[32m",
        logging.WARNING: "\033[33m",
        logging.ERROR: "\033[31m",
        logging.CRITICAL: "\033[35m",
    }
    RESET = "\033[0m"

    def __init__(self, use_color: bool = True):
        super().__init__(
            fmt="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
            datefmt="%H:%M:%S",
        )
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        color = self.LEVEL_COLORS.get(record.levelno)
        if not self.use_color or color is None:
            return text
        return text.replace(record.levelname, f"{color}{record.levelname}{self.RESET}", 1)


def setup_logging(log_level: Optional[LogLevel] = None,
                  log_file: Optional[str] = None,
                  structured: Optional[bool] = None) -> logging.Logger:
    """
    Configure the ``extensor_calc`` logger tree.

    Calling it again replaces the previous handlers.

    Args:
        log_level: Threshold for console records; settings decide when None,
            with DEBUG=true forcing debug level
        log_file: Path of a rotating JSON log file; settings decide when None
        structured: Render console records as JSON instead of colored text

    Returns:
        The root application logger
    """
    settings = get_settings()
    default_level = LogLevel.DEBUG if settings.debug else settings.log_level
    level = getattr(logging, (log_level or default_level).value)
    structured = settings.log_structured if structured is None else structured
    log_file = settings.log_file if log_file is None else log_file

    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.handlers.clear()
    logger.setLevel(level)
    logger.propagate = False

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(level)
    console.setFormatter(
        build_structured_formatter() if structured
        else ColoredConsoleFormatter(use_color=sys.stderr.isatty())
    )
    logger.addHandler(console)

    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        rotating = logging.handlers.RotatingFileHandler(path, maxBytes=5_000_000, backupCount=2)
        rotating.setFormatter(build_structured_formatter())
        logger.addHandler(rotating)

    logger.debug("Logging ready", extra={"log_level": logging.getLevelName(level)})
    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a specific module.

    Args:
        name: Module name for the logger

    Returns:
        Logger instance
    """
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


def get_metrics_logger() -> logging.Logger:
    """
    Get the metrics logger for evaluation timing.

    Returns:
        Metrics logger instance
    """
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.metrics")


def log_evaluation(statement: str, execution_time: Optional[float] = None,
                   success: bool = True, value_kind: Optional[str] = None,
                   error: Optional[Exception] = None) -> None:
    """
    Record one evaluated statement on the metrics logger.

    Successes go out at debug level, failures at info.

    Args:
        statement: Source text, cut to 200 characters
        execution_time: Seconds spent evaluating
        success: Whether evaluation succeeded
        value_kind: Tag of the produced value
        error: Exception raised by a failed statement
    """
    fields = {"event_type": "evaluation", "statement": statement[:200], "success": success}
    optional = {"execution_time": execution_time, "value_kind": value_kind}
    fields.update((key, value) for key, value in optional.items() if value is not None)
    if error is not None:
        fields["error_type"] = type(error).__name__
        fields["error_message"] = str(error)[:500]

    metrics = get_metrics_logger()
    if success:
        metrics.debug("Statement evaluated", extra=fields)
    else:
        metrics.info("Statement failed", extra=fields)
