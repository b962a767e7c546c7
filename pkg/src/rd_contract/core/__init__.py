"""Numerical core of rd_contract."""

from .utils.logging import logging_helper, setup_rd_contract_logging

__all__ = [
    "logging_helper",
    "setup_rd_contract_logging",
]
