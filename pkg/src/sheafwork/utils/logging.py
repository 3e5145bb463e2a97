"""Centralized logging configuration for sheafwork."""

import logging
import traceback

from rich.console import Console
from rich.logging import RichHandler

# Reports go to stdout; logs and error panels go to stderr.
_console = Console(stderr=True)

_logging_initialized = False


def get_console() -> Console:
    """Get the global stderr console instance."""
    return _console


def configure_logging(
    log_level: str = "WARNING",
    module_name: str = "sheafwork",
    verbose: bool = False,
) -> logging.Logger:
    """Configure logging for sheafwork.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        module_name: The name of the module to get logger for
        verbose: Force DEBUG level regardless of log_level

    Returns:
        Configured logger instance
    """
    global _logging_initialized

    if verbose:
        log_level = "DEBUG"
    numeric_level = getattr(logging, log_level.upper(), logging.WARNING)

    if not _logging_initialized:
        logging.basicConfig(
            level=numeric_level,
            format="%(message)s",
            datefmt="[%X]",
            handlers=[RichHandler(console=_console, rich_tracebacks=True, markup=False)],
        )
        _logging_initialized = True
    else:
        logging.getLogger().setLevel(numeric_level)

    logger = logging.getLogger(module_name)
    logger.setLevel(numeric_level)

    # networkx and numpy are quiet, but keep them below our own debug chatter
    for lib_name in ("networkx", "numpy"):
        logging.getLogger(lib_name).setLevel(logging.WARNING)

    if verbose:
        logger.debug(f"Logging initialized/updated. App level: {log_level}")

    return logger


def log_exception(logger: logging.Logger, e: Exception, context: str = "operation") -> None:
    """Centralized exception logging.

    The traceback is only emitted at DEBUG level; the one-line message always is.

    Args:
        logger: Logger instance
        e: Exception that was caught
        context: Context description for the error
    """
    logger.debug(f"Traceback for {context}:\n{traceback.format_exc()}")
    logger.error(f"Error in {context}: {e}")
