"""Linear benchmark systems: a scalar equation with a spatially varying rate and a two-species
system whose second species diffuses toward open cytoplasm.
"""

import numpy as np

from rd_contract.core.certificates import certify_scalar_fickian
from rd_contract.core.diffusion import LAMBDA_STAR
from rd_contract.core.errors import InvalidParameterError
from rd_contract.core.grid import available_volume, integrate_values
from rd_contract.core.simulation import RDSystem, build_system
from rd_contract.types.certificate import CertificateReport
from rd_contract.types.diffusion import DiffusionSpec
from rd_contract.types.grid import ScalarField, SpatialGrid
from rd_contract.types.simulation import ReactionSpec

TWO_SPECIES_MATRIX = np.array([[-1.0, 1.0], [-1.0, 0.5]])
TWO_SPECIES_DIFFUSIVITY = (10.0, 0.25)
TWO_SPECIES_THETAS = (0.5, 1.0)
NUCLEOID_CENTRE = 0.5


def linear_reaction(a_nodes: np.ndarray) -> ReactionSpec:
    """f(t, x, z) = A(x) z for a fixed stack of matrices, shape (n, s, s)."""
    a_nodes = np.array(a_nodes, dtype=float)
    a_nodes.setflags(write=False)
    space_varying = not np.allclose(a_nodes, a_nodes[0])

    def f(_t: float, _x: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.einsum("kij,jk->ik", a_nodes, z)

    def jacobian(_t: float, _x: np.ndarray, _z: np.ndarray) -> np.ndarray:
        return a_nodes

    return ReactionSpec(
        n_species=a_nodes.shape[1],
        f=f,
        jacobian=jacobian,
        linear=True,
        space_varying=space_varying,
    )


def scalar_rate(epsilon: float, omega: float, grid: SpatialGrid) -> ScalarField:
    """a(x) = -epsilon + sin(omega x) - integral(sin(omega x)), averaged by quadrature so a_bar = -epsilon."""
    wave = np.sin(omega * grid.nodes)
    return ScalarField(grid, -epsilon + wave - integrate_values(wave, grid))


def build_example_3_1(epsilon: float, omega: float, grid: SpatialGrid) -> RDSystem:
    """Scalar Fickian system dz/dt = d z_xx + a(x) z with d = epsilon/pi^2.

    Raises:
        InvalidParameterError: If epsilon is not positive
    """
    if not epsilon > 0.0:
        raise InvalidParameterError(f"epsilon must be positive, got {epsilon}")
    a = scalar_rate(epsilon, omega, grid)
    diffusion = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.full(grid.n, epsilon / LAMBDA_STAR)))])
    return build_system(diffusion, linear_reaction(a.values[:, None, None]))


def scalar_certificate(epsilon: float, omega: float, grid: SpatialGrid) -> CertificateReport:
    """Closed-form certificate of the scalar system on ``grid``, with d = epsilon/pi^2."""
    return certify_scalar_fickian(scalar_rate(epsilon, omega, grid), epsilon / LAMBDA_STAR)


def two_species_diffusion(zeta: float, r: float, grid: SpatialGrid) -> DiffusionSpec:
    """D = (zeta/pi^2) [10, v_r(x)/4] with Theta = [1/2, 1]."""
    if not zeta > 0.0:
        raise InvalidParameterError(f"zeta must be positive, got {zeta}")
    v_r = available_volume(r, NUCLEOID_CENTRE, grid).v.values
    scale = zeta / LAMBDA_STAR
    d1 = ScalarField(grid, np.full(grid.n, scale * TWO_SPECIES_DIFFUSIVITY[0]))
    d2 = ScalarField(grid, scale * TWO_SPECIES_DIFFUSIVITY[1] * v_r)
    return DiffusionSpec.from_pairs(zip(TWO_SPECIES_THETAS, (d1, d2), strict=True))


def build_example_3_2(zeta: float, r: float, grid: SpatialGrid) -> RDSystem:
    """Two-species linear system with the constant Hurwitz matrix [[-1, 1], [-1, 1/2]].

    Raises:
        InvalidParameterError: If zeta <= 0 or r < 0
    """
    a_nodes = np.broadcast_to(TWO_SPECIES_MATRIX, (grid.n, 2, 2))
    return build_system(two_species_diffusion(zeta, r, grid), linear_reaction(a_nodes))


def nu_of_r(r: float, grid: SpatialGrid) -> float:
    """nu(r) = min v_r^2 / max v_r."""
    v = available_volume(r, NUCLEOID_CENTRE, grid).v
    return v.min**2 / v.max


def zeta_upper_bound(r: float, grid: SpatialGrid) -> float:
    """Smallest zeta at which the hierarchical certificate passes, 2 / nu(r)."""
    return 2.0 / nu_of_r(r, grid)


def two_species_margins(zeta: float, r: float, grid: SpatialGrid) -> tuple[float, float]:
    """Analytic diffusion floors (10 zeta, zeta nu(r) / 4)."""
    return TWO_SPECIES_DIFFUSIVITY[0] * zeta, TWO_SPECIES_DIFFUSIVITY[1] * zeta * nu_of_r(r, grid)


def uniform_initial_state(grid: SpatialGrid) -> np.ndarray:
    """z(0, x) = 1."""
    return np.ones((1, grid.n))


def ramp_initial_state(grid: SpatialGrid) -> np.ndarray:
    """z1(0, x) = x, z2(0, x) = 1 + x."""
    return np.vstack([grid.nodes, 1.0 + grid.nodes])


def is_hurwitz(a: np.ndarray) -> bool:
    """All eigenvalues have negative real part."""
    return bool(np.max(np.linalg.eigvals(np.asarray(a, dtype=float)).real) < 0.0)


def two_species_eigenvalues() -> np.ndarray:
    """Eigenvalues of the reaction matrix, -1/4 +/- i sqrt(7)/4."""
    return np.linalg.eigvals(TWO_SPECIES_MATRIX)

