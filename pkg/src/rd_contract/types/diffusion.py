"""Per-species theta-diffusion parameters and the null-space weights derived from them."""

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from rd_contract.core.errors import InvalidSpecError

from .grid import ScalarField, SpatialGrid


@dataclass(frozen=True, eq=False)
class SpeciesDiffusion:
    """Flux J = -d^(2 theta) grad(d^(1 - 2 theta) y) for one species.

    theta = 1/2 is Fickian diffusion; theta = 1 drifts toward larger d.
    """

    theta: float
    d: ScalarField

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= 1.0:
            raise InvalidSpecError(f"theta must lie in [0, 1], got {self.theta}")
        if not np.all(np.isfinite(self.d.values)) or np.any(self.d.values <= 0.0):
            idx = int(np.argmin(self.d.values))
            raise InvalidSpecError(
                f"Diffusivity must be strictly positive; d={self.d.values[idx]:.3e} at x={self.d.grid.nodes[idx]:.6g}"
            )


@dataclass(frozen=True, eq=False)
class DiffusionSpec:
    """Diffusion for every species of a system, all on the same grid."""

    species: tuple[SpeciesDiffusion, ...]

    def __post_init__(self) -> None:
        if not self.species:
            raise InvalidSpecError("DiffusionSpec needs at least one species")
        grids = {id(s.d.grid) for s in self.species}
        if len(grids) != 1:
            raise InvalidSpecError("All species must share one grid")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, ScalarField]]) -> "DiffusionSpec":
        return cls(species=tuple(SpeciesDiffusion(theta=float(theta), d=d) for theta, d in pairs))

    @property
    def grid(self) -> SpatialGrid:
        return self.species[0].d.grid

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def thetas(self) -> tuple[float, ...]:
        return tuple(s.theta for s in self.species)


@dataclass(frozen=True, eq=False)
class PsiWeight:
    """Normalized no-flux profiles psi_i(x), one per species.

    ``matrix`` stacks them as (species, nodes); at node j the diagonal weight is matrix[:, j].
    """

    fields: tuple[ScalarField, ...]

    @property
    def grid(self) -> SpatialGrid:
        return self.fields[0].grid

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([f.values for f in self.fields])

    @property
    def sup(self) -> float:
        """Largest diagonal entry over species and nodes."""
        return float(self.matrix.max())

    @property
    def inf(self) -> float:
        """Smallest diagonal entry over species and nodes."""
        return float(self.matrix.min())

    @classmethod
    def identity(cls, grid: SpatialGrid, n_species: int) -> "PsiWeight":
        return cls(fields=tuple(ScalarField(grid, np.ones(grid.n)) for _ in range(n_species)))


@dataclass(frozen=True, eq=False)
class HalfNodeFlux:
    """Flux values at the n + 1 cell faces, boundary faces included.

    ``positions`` holds 0, the n - 1 interior half-nodes, then 1. The two boundary entries are 0.
    """

    grid: SpatialGrid
    positions: np.ndarray
    values: np.ndarray
