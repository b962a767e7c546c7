"""Fixtures for command line tests."""

import pytest

from rd_contract.core.utils import logger


@pytest.fixture(autouse=True)
def _reset_cli_logger():
    """main() binds a handler to the captured stdout; drop it once the test ends."""
    yield
    logger.handlers.clear()
    logger.propagate = True
    logger.setLevel("NOTSET")
