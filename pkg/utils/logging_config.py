"""Centralized logging configuration for all components"""
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

import structlog


def setup_logging(
    component_name: str,
    log_level: int = logging.INFO,
    log_dir: Optional[Union[str, Path]] = None,
):
    """
    Set up logging for a component: console on stderr, optional file

    structlog renders through the stdlib handlers so that library loggers
    and our bound loggers end up in the same place. stdout is left alone
    because the CLI writes its data there.

    Args:
        component_name: Name of the component (used for log filename)
        log_level: Logging level (default: INFO)
        log_dir: Directory for the detailed log file; no file when None

    Returns:
        Bound structlog logger for the component
    """
    configure_root_logger(log_level)
    root_logger = logging.getLogger()

    # Create formatters
    detailed_formatter = structlog.stdlib.ProcessorFormatter(
        processor=structlog.dev.ConsoleRenderer(colors=False),
        foreign_pre_chain=[structlog.stdlib.add_log_level, structlog.processors.TimeStamper(fmt="iso")],
    )
    simple_formatter = structlog.stdlib.ProcessorFormatter(
        processor=structlog.processors.KeyValueRenderer(key_order=["level", "event"]),
        foreign_pre_chain=[structlog.stdlib.add_log_level],
    )

    # Console handler - simpler format, never stdout
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(simple_formatter)
    root_logger.addHandler(console_handler)

    # File handler - detailed logs
    if log_dir is not None:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path / f"{component_name}.log", mode="a")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(detailed_formatter)
        root_logger.addHandler(file_handler)
        root_logger.setLevel(min(log_level, logging.DEBUG))

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )
    suppress_noisy_loggers()

    logger = structlog.get_logger(component_name)
    logger.debug("logging_started", component=component_name, started=datetime.now().isoformat())
    return logger


def configure_root_logger(log_level: int = logging.WARNING):
    """Configure root logger to prevent duplicate handlers"""
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # Remove any existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)


def suppress_noisy_loggers():
    """Suppress verbose logging from certain libraries"""
    logging.getLogger("concurrent.futures").setLevel(logging.WARNING)
