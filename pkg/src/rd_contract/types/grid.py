"""Spatial containers: the 1-D mesh, fields on it and available-volume profiles.

These carry numpy arrays, so they are frozen dataclasses rather than pydantic models. Arrays are
marked read-only on construction; the containers can be shared between worker processes.
"""

from dataclasses import dataclass

import numpy as np


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SpatialGrid:
    """Uniform mesh on [0, 1] with trapezoid quadrature weights.

    Attributes:
        n: Node count (at least 3)
        nodes: Node positions, nodes[0] = 0 and nodes[-1] = 1
        quad_weights: h/2 at the two ends, h in the interior; they sum to |Omega| = 1
    """

    n: int
    nodes: np.ndarray
    quad_weights: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "quad_weights", _frozen(self.quad_weights))

    @property
    def h(self) -> float:
        """Node spacing."""
        return 1.0 / (self.n - 1)

    @property
    def half_nodes(self) -> np.ndarray:
        """Midpoints between consecutive nodes (n - 1 values)."""
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Nodal values of a real function on a grid."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = _frozen(self.values)
        if values.shape != (self.grid.n,):
            raise ValueError(f"Field has shape {values.shape}, grid expects ({self.grid.n},)")
        object.__setattr__(self, "values", values)

    @property
    def min(self) -> float:
        return float(self.values.min())

    @property
    def max(self) -> float:
        return float(self.values.max())


@dataclass(frozen=True, eq=False)
class VolumeProfile:
    """Available volume v(x) = exp(-r^2 rho(x)) for a molecule of gyration radius r.

    Attributes:
        r: Radius of gyration
        x_star: Nucleoid centre
        rho: Nucleoid density field
        v: Available volume field, values in (0, 1]
    """

    r: float
    x_star: float
    rho: ScalarField
    v: ScalarField

    @property
    def grid(self) -> SpatialGrid:
        return self.v.grid

    @property
    def extrema_ratio(self) -> float:
        """sup v / inf v, the weight that appears in the invariant-set bounds."""
        return self.v.max / self.v.min
