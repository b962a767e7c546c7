"""Pytest configuration for all tests."""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from rd_contract.core.grid import make_uniform_grid
from rd_contract.types.config import RunConfig
from rd_contract.types.grid import ScalarField, SpatialGrid


@pytest.fixture(scope="session")
def grid() -> SpatialGrid:
    """Coarse grid for fast unit tests."""
    return make_uniform_grid(101)


@pytest.fixture(scope="session")
def fine_grid() -> SpatialGrid:
    """Default-resolution grid (n = 500) used by the stability checks."""
    return make_uniform_grid(500)


@pytest.fixture
def make_field(grid: SpatialGrid) -> Callable[[Callable[[np.ndarray], np.ndarray]], ScalarField]:
    """Factory fixture that evaluates a function of x on the coarse grid.

    Usage:
        def test_example(make_field):
            d = make_field(lambda x: 1.0 + x)
    """

    def _make(fn: Callable[[np.ndarray], np.ndarray]) -> ScalarField:
        return ScalarField(grid, np.broadcast_to(np.asarray(fn(grid.nodes), dtype=float), (grid.n,)))

    return _make


@pytest.fixture
def make_config(tmp_path: Path) -> Callable[..., RunConfig]:
    """Factory fixture for a small, fast run config writing into ``tmp_path``.

    Usage:
        def test_example(make_config):
            config = make_config(**{"model.preset": "example32", "model.zeta": 3.0})
    """

    def _make(**overrides: object) -> RunConfig:
        base = {
            "grid.n": 101,
            "time.t_end": 20.0,
            "time.window": (10.0, 20.0),
            "sampling.n_random": 8,
            "output_dir": str(tmp_path / "out"),
        }
        return RunConfig().with_overrides({**base, **overrides})

    return _make
