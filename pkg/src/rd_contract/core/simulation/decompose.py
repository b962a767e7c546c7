"""Split a state into its spatial averages and the deviation from the no-flux profile."""

import numpy as np

from rd_contract.core.grid import integrate_values, l2_norm
from rd_contract.types.diffusion import PsiWeight
from rd_contract.types.simulation import DecomposedState


def decompose(state: np.ndarray, psi: PsiWeight) -> DecomposedState:
    """w_bar = integral(z), z_perp = z - Psi w_bar.

    Args:
        state: (species, n) nodal values
        psi: Normalized no-flux profiles of the same species

    Returns:
        Decomposition whose deviation integrates to zero per species
    """
    z = np.atleast_2d(np.asarray(state, dtype=float))
    if z.shape != psi.matrix.shape:
        raise ValueError(f"State has shape {z.shape}, profiles have shape {psi.matrix.shape}")
    w_bar = np.atleast_1d(integrate_values(z, psi.grid))
    z_perp = z - psi.matrix * w_bar[:, None]
    return DecomposedState(grid=psi.grid, w_bar=w_bar, z_perp=z_perp)


def recompose(parts: DecomposedState, psi: PsiWeight) -> np.ndarray:
    return psi.matrix * parts.w_bar[:, None] + parts.z_perp


def deviation_norm(state: np.ndarray, psi: PsiWeight) -> float:
    """L2 norm of z_perp, summed over species."""
    return l2_norm(decompose(state, psi).z_perp, psi.grid)
