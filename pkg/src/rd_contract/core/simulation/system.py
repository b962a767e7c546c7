from dataclasses import dataclass

from rd_contract.core.diffusion import OperatorAssembly, assemble_operators, psi_weights
from rd_contract.core.errors import InvalidSpecError
from rd_contract.types.diffusion import DiffusionSpec, PsiWeight
from rd_contract.types.grid import SpatialGrid
from rd_contract.types.simulation import ReactionSpec


@dataclass(frozen=True, eq=False)
class RDSystem:
    """dz/dt = L_Theta(D, z) + f(t, x, z) on one grid, with the operators already assembled."""

    diffusion: DiffusionSpec
    reaction: ReactionSpec
    operators: tuple[OperatorAssembly, ...]
    psi: PsiWeight

    @property
    def grid(self) -> SpatialGrid:
        return self.diffusion.grid

    @property
    def n_species(self) -> int:
        return self.diffusion.n_species

    def lambda_floors(self) -> tuple[float, ...]:
        return tuple(op.lambda_bound for op in self.operators)

    def lambda_numeric(self) -> tuple[float, ...]:
        return tuple(op.lambda_numeric for op in self.operators)


def build_system(diffusion: DiffusionSpec, reaction: ReactionSpec) -> RDSystem:
    """Assemble every species operator and bundle it with the kinetics.

    Raises:
        InvalidSpecError: If the species counts disagree or a diffusion entry is invalid
    """
    if diffusion.n_species != reaction.n_species:
        raise InvalidSpecError(
            f"Diffusion has {diffusion.n_species} species but the reaction has {reaction.n_species}"
        )
    return RDSystem(
        diffusion=diffusion,
        reaction=reaction,
        operators=assemble_operators(diffusion),
        psi=psi_weights(diffusion),
    )
