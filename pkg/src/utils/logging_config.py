import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

import structlog

from src.config.settings import get_settings


class SimulatorLogger:

    _instance = None
    _configured = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._configured:
            self.setup_logging()
            SimulatorLogger._configured = True

    def setup_logging(
        self,
        log_level: Optional[str] = None,
        log_format: Optional[str] = None,
        environment: Optional[str] = None,
        enable_file_logging: Optional[bool] = None,
    ):

        # Get configuration from settings or defaults
        settings = get_settings()
        environment = environment or settings.ENVIRONMENT
        log_level = log_level or self._get_log_level_for_environment(environment, settings.LOG_LEVEL)
        log_format = log_format or settings.LOG_FORMAT
        if enable_file_logging is None:
            enable_file_logging = settings.ENABLE_FILE_LOGGING

        shared_processors = [
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="%Y-%m-%d %H:%M:%S"),
        ]

        renderer = (
            structlog.processors.JSONRenderer(sort_keys=True)
            if log_format == "json"
            else structlog.dev.ConsoleRenderer(colors=False)
        )

        formatter = structlog.stdlib.ProcessorFormatter(
            foreign_pre_chain=shared_processors,
            processors=[
                structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                renderer,
            ],
        )

        # Console handler; stdout is reserved for reports
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        console_handler.setLevel(getattr(logging, log_level.upper()))

        handlers = [console_handler]

        if enable_file_logging:
            log_dir = Path(settings.LOG_DIR)
            log_dir.mkdir(exist_ok=True)
            main_log_file = log_dir / f"mzi_{datetime.now().strftime('%Y%m%d')}.log"
            file_handler = logging.FileHandler(main_log_file)
            file_handler.setFormatter(formatter)
            file_handler.setLevel(logging.DEBUG)
            handlers.append(file_handler)

        root_logger = logging.getLogger()
        root_logger.setLevel(logging.DEBUG)

        # Clear existing handlers
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        for handler in handlers:
            root_logger.addHandler(handler)

        structlog.configure(
            processors=shared_processors + [
                structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
            ],
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=False,
        )

        self._configure_component_loggers(environment)

        logger = structlog.get_logger("mzi.logging")
        logger.debug("logging_configured", environment=environment, level=log_level, handlers=len(handlers))

    def _get_log_level_for_environment(self, environment: str, configured: str) -> str:
        levels = {
            "development": configured,
            "testing": "WARNING",
            "production": "WARNING"
        }
        return levels.get(environment, configured)

    def _configure_component_loggers(self, environment: str):
        component_level = logging.DEBUG if environment == "development" else logging.INFO

        components = [
            "mzi.qcore",
            "mzi.interferometer",
            "mzi.analysis",
            "mzi.discrimination",
            "mzi.danan",
            "mzi.cli",
        ]

        for component in components:
            logging.getLogger(component).setLevel(component_level)


# Singleton instance
_simulator_logger = SimulatorLogger()


def setup_logging(
    log_level: Optional[str] = None,
    log_format: Optional[str] = None,
    environment: Optional[str] = None,
) -> structlog.stdlib.BoundLogger:
    """
    Set up logging configuration for the entire application.

    Args:
        log_level: Log level (DEBUG, INFO, WARNING, ERROR)
        log_format: Renderer (console, json)
        environment: Environment (development, testing, production)

    Returns:
        Logger instance
    """
    _simulator_logger.setup_logging(log_level, log_format, environment)
    return get_logger("mzi.main")


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Get a logger for a specific component.

    Args:
        name: Logger name (e.g., 'mzi.analysis')

    Returns:
        Logger instance
    """
    return structlog.get_logger(name)


def get_engine_logger() -> structlog.stdlib.BoundLogger:
    """Get logger for the state engine."""
    return get_logger("mzi.qcore")


def get_network_logger() -> structlog.stdlib.BoundLogger:
    """Get logger for network construction and evolution."""
    return get_logger("mzi.interferometer")


def get_analysis_logger() -> structlog.stdlib.BoundLogger:
    """Get logger for trace and argument analysis."""
    return get_logger("mzi.analysis")


def get_discrimination_logger() -> structlog.stdlib.BoundLogger:
    """Get logger for POVMs and accounting."""
    return get_logger("mzi.discrimination")


def get_danan_logger() -> structlog.stdlib.BoundLogger:
    """Get logger for the frequency-tagging simulation."""
    return get_logger("mzi.danan")


def get_cli_logger() -> structlog.stdlib.BoundLogger:
    """Get logger for the experiment runner."""
    return get_logger("mzi.cli")


class RunLogger:
    """Context manager for subcommand-scoped logging."""

    def __init__(self, command: str, logger: Any):
        self.command = command
        self.logger = logger
        self.start_time = None

    def __enter__(self):
        self.start_time = datetime.now()
        structlog.contextvars.bind_contextvars(command=self.command)
        self.logger.info("run_started")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        duration = (datetime.now() - self.start_time).total_seconds()
        if exc_type:
            self.logger.error("run_failed", duration_s=round(duration, 3), error=str(exc_val))
        else:
            self.logger.info("run_completed", duration_s=round(duration, 3))
        structlog.contextvars.unbind_contextvars("command")
