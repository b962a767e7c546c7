"""Logging utilities for the rd_contract package."""

import logging
import sys

from .logging_helper import LoggingHelper, file_logging_context

logger = logging.getLogger("RD-Contract")
logging_helper = LoggingHelper()


def setup_rd_contract_logging(level: int = logging.INFO) -> None:
    """
    Setup logging with a clean format for the rd_contract package.

    Args:
        level: Logging level (default: INFO)
    """
    logger.handlers.clear()

    # stdout keeps log lines interleaved with panel output
    logging_handler = logging.StreamHandler(sys.stdout)
    logging_handler.setFormatter(logging.Formatter("[RD Contract] [%(levelname)s] %(message)s"))

    logger.addHandler(logging_handler)
    logger.setLevel(level)
    logger.propagate = False


__all__ = [
    "LoggingHelper",
    "file_logging_context",
    "logger",
    "logging_helper",
    "setup_rd_contract_logging",
]
