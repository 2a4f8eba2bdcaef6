"""Root logging setup shared by every qwres module."""

import logging
import sys
from logging.handlers import TimedRotatingFileHandler

from config.globals import C_LOG_BASE_NAME, C_LOG_FORMAT, LOG_LEVEL, LOGS_PATH

# Configure root logger only once
root_logger = logging.getLogger()
if not root_logger.handlers:
    # Console handler; stdout is reserved for command output
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(C_LOG_FORMAT))
    root_logger.addHandler(console_handler)

    if LOGS_PATH is not None:
        LOGS_PATH.mkdir(parents=True, exist_ok=True)
        file_handler = TimedRotatingFileHandler(
            LOGS_PATH / f"{C_LOG_BASE_NAME}.log",
            when="midnight",  # Rotate at midnight
            backupCount=30,  # Keep logs for the last 30 days
        )
        file_handler.setFormatter(logging.Formatter(C_LOG_FORMAT))
        root_logger.addHandler(file_handler)

    root_logger.setLevel(LOG_LEVEL)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger with the specified name.
    This ensures we don't add duplicate handlers when importing modules.

    Args:
        name: The name of the logger, typically __name__

    Returns:
        A configured logger instance
    """
    logger = logging.getLogger(name)
    logger.propagate = True
    return logger
