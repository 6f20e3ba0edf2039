"""
Centralized logging configuration for the checker.
"""
import os
import sys
import logging
from pythonjsonlogger import jsonlogger

# Determine log level from environment
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = os.getenv("LOG_FORMAT", "text")  # json or text


def setup_logger(name: str = "cohesive_kernel") -> logging.Logger:
    """
    Configure and return a logger instance.

    Records go to stderr; stdout is reserved for command results.

    Args:
        name: Logger name (default: cohesive_kernel)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, LOG_LEVEL, logging.WARNING))

    # Remove existing handlers to avoid duplicates
    logger.handlers.clear()

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(getattr(logging, LOG_LEVEL, logging.WARNING))

    if LOG_FORMAT == "json":
        formatter = jsonlogger.JsonFormatter(
            fmt="%(asctime)s %(name)s %(levelname)s %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )
    else:
        formatter = logging.Formatter(
            fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )

    handler.setFormatter(formatter)
    logger.addHandler(handler)

    # Prevent propagation to root logger
    logger.propagate = False

    return logger


# Create default logger instance
logger = setup_logger()


def log_declaration(name: str, kind: str, ok: bool, **kwargs):
    """Log a declaration accepted or rejected by the kernel"""
    level = logging.INFO if ok else logging.WARNING
    logger.log(level, f"{'Checked' if ok else 'Rejected'} {kind} {name}", extra={
        "declaration": name,
        "kind": kind,
        "ok": ok,
        **kwargs
    })


def log_error(message: str, exc: Exception = None, **kwargs):
    """Log an error with optional exception details"""
    extra = kwargs.copy()
    if exc:
        extra["error_type"] = type(exc).__name__
        extra["error_message"] = str(exc)
    logger.error(message, extra=extra, exc_info=exc is not None)


def log_corpus_file(file: str, tier: str, ok: bool, **kwargs):
    """Log the outcome of one corpus file against its expectation"""
    level = logging.INFO if ok else logging.WARNING
    logger.log(level, f"Corpus {tier}/{file}", extra={
        "file": file,
        "tier": tier,
        "ok": ok,
        **kwargs
    })
