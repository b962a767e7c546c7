"""Pytest configuration for simulation tests."""

from collections.abc import Callable

import numpy as np
import pytest

from rd_contract.core.models import linear_reaction
from rd_contract.core.simulation import RDSystem, build_system
from rd_contract.types.diffusion import DiffusionSpec
from rd_contract.types.grid import ScalarField, SpatialGrid


@pytest.fixture
def make_diffusion_only(grid: SpatialGrid) -> Callable[[float, Callable[[np.ndarray], np.ndarray]], RDSystem]:
    """Factory fixture for a one-species system with zero kinetics.

    Usage:
        def test_example(make_diffusion_only):
            system = make_diffusion_only(1.0, lambda x: 1.0 + x)
    """

    def _make(theta: float, d_fn: Callable[[np.ndarray], np.ndarray]) -> RDSystem:
        d = ScalarField(grid, d_fn(grid.nodes))
        return build_system(DiffusionSpec.from_pairs([(theta, d)]), linear_reaction(np.zeros((grid.n, 1, 1))))

    return _make
