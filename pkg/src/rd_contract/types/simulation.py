"""Reaction terms, trajectories and the derived quantities of a simulation run.

States are stored as (species, n) arrays. A trajectory stacks them as (samples, species, n).
"""

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict

from rd_contract.core.errors import InvalidSpecError

from .grid import SpatialGrid

ReactionFunction = Callable[[float, np.ndarray, np.ndarray], np.ndarray]
"""(t, x (n,), z (species, n)) -> f, shape (species, n)."""

ReactionJacobian = Callable[[float, np.ndarray, np.ndarray], np.ndarray]
"""(t, x (n,), z (species, n)) -> df/dz, shape (n, species, species)."""

JACOBIAN_RTOL = 1e-5


def _readonly(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ReactionSpec:
    """Local kinetics f(t, x, z) with its Jacobian.

    Attributes:
        n_species: Number of species
        f: Vectorized reaction evaluator
        jacobian: Vectorized Jacobian evaluator
        linear: f is linear in z
        space_varying: f depends on x
        time_varying: f depends on t
        nonnegative: States are concentrations; a run fails if any value drops below -1e-9
    """

    n_species: int
    f: ReactionFunction
    jacobian: ReactionJacobian
    linear: bool = False
    space_varying: bool = False
    time_varying: bool = False
    nonnegative: bool = False

    def check_jacobian(self, grid: SpatialGrid, probes: int = 8, rng: np.random.Generator | None = None) -> float:
        """Compare the analytic Jacobian with central differences at random states.

        Args:
            grid: Nodes at which f is evaluated
            probes: Number of random states
            rng: Source of the random states; defaults to ``default_rng(0)``

        Returns:
            Largest relative error seen

        Raises:
            InvalidSpecError: If the relative error exceeds 1e-5
        """
        rng = rng if rng is not None else np.random.default_rng(0)
        x = grid.nodes
        worst = 0.0
        for _ in range(probes):
            t = float(rng.uniform(0.0, 1.0))
            z = rng.uniform(0.1, 1.0, size=(self.n_species, grid.n))
            analytic = np.asarray(self.jacobian(t, x, z), dtype=float)
            if analytic.shape != (grid.n, self.n_species, self.n_species):
                raise InvalidSpecError(
                    f"Jacobian has shape {analytic.shape}, expected {(grid.n, self.n_species, self.n_species)}"
                )
            for j in range(self.n_species):
                step = 1e-6 * max(1.0, float(np.max(np.abs(z[j]))))
                bump = np.zeros_like(z)
                bump[j] = step
                column = (self.f(t, x, z + bump) - self.f(t, x, z - bump)) / (2.0 * step)
                scale = max(1.0, float(np.max(np.abs(analytic))))
                error = float(np.max(np.abs(column.T - analytic[:, :, j]))) / scale
                worst = max(worst, error)
        if worst > JACOBIAN_RTOL:
            raise InvalidSpecError(f"Jacobian disagrees with finite differences (relative error {worst:.3e})")
        return worst


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of a reaction-diffusion run.

    Attributes:
        grid: Spatial grid
        times: Strictly increasing sample times
        states: Samples, shape (len(times), species, n)
        norms: L2 norm of each sample, summed over species
    """

    grid: SpatialGrid
    times: np.ndarray
    states: np.ndarray
    norms: np.ndarray

    def __post_init__(self) -> None:
        times = _readonly(self.times)
        if times.ndim != 1 or np.any(np.diff(times) <= 0.0):
            raise ValueError("Trajectory times must be strictly increasing")
        states = _readonly(self.states)
        if states.shape[0] != times.size or states.shape[-1] != self.grid.n:
            raise ValueError(f"States have shape {states.shape} for {times.size} times on n={self.grid.n}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "norms", _readonly(self.norms))

    @property
    def n_species(self) -> int:
        return int(self.states.shape[1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def averages(self) -> np.ndarray:
        """Spatial averages per sample and species, shape (len(times), species)."""
        return self.states @ self.grid.quad_weights


@dataclass(frozen=True, eq=False)
class DecomposedState:
    """z = Psi w_bar + z_perp with integral(z_perp) = 0 for every species."""

    grid: SpatialGrid
    w_bar: np.ndarray
    z_perp: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "w_bar", _readonly(self.w_bar))
        object.__setattr__(self, "z_perp", _readonly(self.z_perp))


@dataclass(frozen=True, eq=False)
class ContractionDiagnostics:
    """Distance between two trajectories in the block metric, per sample time.

    v1 = e_bar^T M1 e_bar and v2 = integral of e_perp^T Gamma Psi^-1 e_perp dx.
    """

    times: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    @property
    def v(self) -> np.ndarray:
        return self.v1 + self.v2

    def envelope_ratio(self, lambda_star: float) -> np.ndarray:
        """v(t) / (v(0) exp(-2 lambda_star t)); bounded by 1 when the contraction rate holds."""
        v = self.v
        if v[0] == 0.0:
            return np.zeros_like(v)
        return v / (v[0] * np.exp(-2.0 * lambda_star * self.times))


class Stability(StrEnum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NEUTRAL = "neutral"


class SweepPoint(BaseModel):
    """One row of a parameter sweep."""

    model_config = ConfigDict(frozen=True)

    parameter: float
    slope: float
    classification: Stability
    certified: bool | None = None


class CriticalPoint(BaseModel):
    """Bisected critical parameter for one value of a secondary parameter."""

    model_config = ConfigDict(frozen=True)

    r: float
    nu: float
    critical: float
    bound: float
