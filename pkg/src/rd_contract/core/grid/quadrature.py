"""Mesh construction, trapezoid integration and available-volume profiles."""

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import expit

from rd_contract.core.errors import InvalidGridError, InvalidParameterError, InvalidProfileError
from rd_contract.types.grid import ScalarField, SpatialGrid, VolumeProfile

NUCLEOID_STEEPNESS = 20.0


def make_uniform_grid(n: int) -> SpatialGrid:
    """Build the uniform mesh on [0, 1] with n nodes.

    Raises:
        InvalidGridError: If n < 3
    """
    if n < 3:
        raise InvalidGridError(f"Grid needs at least 3 nodes, got n={n}")

    h = 1.0 / (n - 1)
    nodes = np.linspace(0.0, 1.0, n)
    weights = np.full(n, h)
    weights[0] = weights[-1] = 0.5 * h
    return SpatialGrid(n=n, nodes=nodes, quad_weights=weights)


def integrate_values(values: np.ndarray, grid: SpatialGrid) -> np.ndarray | float:
    """Trapezoid integral over the last axis of an array of nodal values."""
    result = sp_integrate.trapezoid(np.asarray(values, dtype=float), dx=grid.h, axis=-1)
    if np.ndim(result) == 0:
        return float(result)
    return result


def integrate(f: ScalarField) -> float:
    """Trapezoid approximation of the integral of f over [0, 1]."""
    return float(integrate_values(f.values, f.grid))


def l2_norm(values: np.ndarray, grid: SpatialGrid) -> float:
    """L2 norm over the domain, summed across species for stacked (species, n) arrays."""
    squared = integrate_values(np.asarray(values) ** 2, grid)
    return float(np.sqrt(np.sum(squared)))


def nucleoid_density(x_star: float, grid: SpatialGrid) -> ScalarField:
    """rho(x) = 1 / (1 + exp(20 |x - x*|))."""
    return ScalarField(grid, expit(-NUCLEOID_STEEPNESS * np.abs(grid.nodes - x_star)))


def available_volume(r: float, x_star: float, grid: SpatialGrid) -> VolumeProfile:
    """Evaluate the available-volume profile v_r(x) = exp(-r^2 rho(x)) on the grid nodes.

    Raises:
        InvalidParameterError: If r < 0 or x_star is outside (0, 1)
    """
    if r < 0:
        raise InvalidParameterError(f"Radius of gyration must be nonnegative, got r={r}")
    if not 0.0 < x_star < 1.0:
        raise InvalidParameterError(f"x_star must lie in (0, 1), got {x_star}")

    rho = nucleoid_density(x_star, grid)
    v = ScalarField(grid, np.exp(-(r**2) * rho.values))
    return VolumeProfile(r=float(r), x_star=float(x_star), rho=rho, v=v)


def normalize_profile(v: ScalarField) -> ScalarField:
    """Return v / integral(v).

    Raises:
        InvalidProfileError: If v has a nonpositive value
    """
    if np.any(v.values <= 0.0):
        idx = int(np.argmin(v.values))
        raise InvalidProfileError(
            f"Profile must be strictly positive; found {v.values[idx]:.3e} at x={v.grid.nodes[idx]:.6g}"
        )
    return ScalarField(v.grid, v.values / integrate(v))
