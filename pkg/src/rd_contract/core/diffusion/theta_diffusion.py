"""Conservative finite-volume theta-diffusion operator on the uniform grid.

Each node i owns a control volume of width w_i (the trapezoid weight). With p = d^(1-2 theta) and
face conductance k_{i+1/2} = (d_i d_{i+1})^theta, the face flux is

    J_{i+1/2} = -k_{i+1/2} (p_{i+1} y_{i+1} - p_i y_i) / h,

the boundary faces carry J = 0, and (L y)_i = (J_{i-1/2} - J_{i+1/2}) / w_i. In matrix form
L = -W^-1 D^T C D P. The nodal field d^(2 theta - 1) makes P y constant, so it is an exact null
vector, and W P (-L) is symmetric: L is self-adjoint in <u, v>_psi = sum_i w_i u_i psi_i^-1 v_i.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal

from rd_contract.core.errors import NumericalFailureError
from rd_contract.core.grid import integrate_values
from rd_contract.core.utils.logging import logger
from rd_contract.types.certificate import EigenReport
from rd_contract.types.diffusion import DiffusionSpec, HalfNodeFlux, PsiWeight, SpeciesDiffusion
from rd_contract.types.grid import ScalarField, SpatialGrid

LAMBDA_STAR = float(np.pi**2)
"""First nonzero Neumann eigenvalue of -d^2/dx^2 on the unit interval."""

EIGEN_RESIDUAL_TOL = 1e-10
NULL_SPACE_RTOL = 1e-12


def _as_species(theta: float, d: ScalarField) -> SpeciesDiffusion:
    return SpeciesDiffusion(theta=float(theta), d=d)


def _face_conductance(species: SpeciesDiffusion) -> np.ndarray:
    """c_{i+1/2} = (d_i d_{i+1})^theta / h, the geometric-mean d raised to 2 theta, over h."""
    d = species.d.values
    grid = species.d.grid
    return (d[:-1] * d[1:]) ** species.theta / grid.h


def _potential_scale(species: SpeciesDiffusion) -> np.ndarray:
    """p = d^(1 - 2 theta): the factor inside the gradient."""
    return species.d.values ** (1.0 - 2.0 * species.theta)


def psi_weight(theta: float, d: ScalarField) -> ScalarField:
    """No-flux profile psi = d^(2 theta - 1) / integral(d^(2 theta - 1)).

    Raises:
        InvalidSpecError: If theta is outside [0, 1] or d is not strictly positive
    """
    species = _as_species(theta, d)
    raw = species.d.values ** (2.0 * species.theta - 1.0)
    return ScalarField(d.grid, raw / integrate_values(raw, d.grid))


def psi_weights(spec: DiffusionSpec) -> PsiWeight:
    """Stack the per-species no-flux profiles."""
    return PsiWeight(fields=tuple(psi_weight(s.theta, s.d) for s in spec.species))


def apply_flux(theta: float, d: ScalarField, y: ScalarField) -> HalfNodeFlux:
    """Face fluxes of y, boundary faces set to exactly zero."""
    species = _as_species(theta, d)
    grid = d.grid
    conductance = _face_conductance(species)
    py = _potential_scale(species) * y.values
    values = np.zeros(grid.n + 1)
    values[1:-1] = -conductance * np.diff(py)
    positions = np.concatenate(([0.0], grid.half_nodes, [1.0]))
    return HalfNodeFlux(grid=grid, positions=positions, values=values)


def eigenvalue_lower_bound(theta: float, d: ScalarField) -> float:
    """Certified floor pi^2 * min d^(2 theta) / max d^(2 theta - 1)."""
    species = _as_species(theta, d)
    values = species.d.values
    return LAMBDA_STAR * float(np.min(values ** (2.0 * species.theta))) / float(
        np.max(values ** (2.0 * species.theta - 1.0))
    )


@dataclass(frozen=True)
class EigenResult:
    """Second eigenvalue of -L in the psi inner product, with solver diagnostics."""

    value: float
    null_value: float
    residual: float
    eigenvector: np.ndarray


@dataclass(frozen=True, eq=False)
class OperatorAssembly:
    """Assembled theta-diffusion operator for one species.

    Attributes:
        species: The (theta, d) pair the operator was built from
        psi: Exact discrete null vector, normalized to unit integral
        matrix: Sparse (CSR) tridiagonal approximation of L
        lambda_bound: Certified floor on the spectral gap
        lambda_star: First nonzero Neumann eigenvalue of the domain
    """

    species: SpeciesDiffusion
    psi: ScalarField
    matrix: sparse.csr_matrix
    lambda_bound: float
    lambda_star: float = LAMBDA_STAR

    @property
    def grid(self) -> SpatialGrid:
        return self.psi.grid

    @property
    def theta(self) -> float:
        return self.species.theta

    @cached_property
    def eigen(self) -> EigenResult:
        return second_eigenvalue_numeric(self, self.psi)

    @property
    def lambda_numeric(self) -> float:
        """Smallest nonzero eigenvalue of -L, computed on first access."""
        return self.eigen.value

    def apply(self, y: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(y, dtype=float)

    def to_triplets(self) -> list[tuple[int, int, float]]:
        """(row, col, value) entries in row-major order."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[k]), int(coo.col[k]), float(coo.data[k])) for k in order]

    def report(self) -> EigenReport:
        """Eigenvalue summary for JSON output."""
        return EigenReport(
            theta=self.theta,
            lambda_bound=self.lambda_bound,
            lambda_numeric=self.eigen.value,
            residual=self.eigen.residual,
            null_eigenvalue=self.eigen.null_value,
            n=self.grid.n,
        )


def assemble_operator(theta: float, d: ScalarField) -> OperatorAssembly:
    """Assemble L(theta, d, .) with no-flux boundary rows.

    Raises:
        InvalidSpecError: If theta is outside [0, 1] or d is not strictly positive
    """
    species = _as_species(theta, d)
    grid = d.grid
    conductance = _face_conductance(species)
    p = _potential_scale(species)
    inv_w = 1.0 / grid.quad_weights

    # -D^T C D as a tridiagonal stencil, then scaled by W^-1 on the left and P on the right
    main = np.zeros(grid.n)
    main[:-1] -= conductance
    main[1:] -= conductance
    main = inv_w * main * p
    upper = inv_w[:-1] * conductance * p[1:]
    lower = inv_w[1:] * conductance * p[:-1]
    matrix = sparse.diags([lower, main, upper], offsets=[-1, 0, 1], format="csr")

    psi = psi_weight(theta, d)
    residual = float(np.max(np.abs(matrix @ psi.values)))
    scale = float(np.max(np.abs(main))) * float(np.max(psi.values))
    if residual > NULL_SPACE_RTOL * max(scale, 1.0) * grid.n:
        logger.warning(f"Null-space residual {residual:.3e} exceeds tolerance for theta={theta}")
    logger.debug(f"Assembled theta={theta} operator on n={grid.n}: |L psi|_max={residual:.3e}")

    return OperatorAssembly(
        species=species,
        psi=psi,
        matrix=matrix,
        lambda_bound=eigenvalue_lower_bound(theta, d),
    )


def assemble_operators(spec: DiffusionSpec) -> tuple[OperatorAssembly, ...]:
    return tuple(assemble_operator(s.theta, s.d) for s in spec.species)


def _symmetric_tridiagonal(species: SpeciesDiffusion) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonals of S (-L) S^-1 with S = (W P)^1/2, plus the diagonal of S.

    The result is Q D^T C D Q with Q = diag(sqrt(p / w)), symmetric tridiagonal.
    """
    grid = species.d.grid
    conductance = _face_conductance(species)
    p = _potential_scale(species)
    q = np.sqrt(p / grid.quad_weights)
    diag = np.zeros(grid.n)
    diag[:-1] += conductance
    diag[1:] += conductance
    diag *= q * q
    off = -conductance * q[:-1] * q[1:]
    return diag, off, np.sqrt(grid.quad_weights * p)


def second_eigenvalue_numeric(assembly: OperatorAssembly, psi: ScalarField) -> EigenResult:
    """Smallest nonzero eigenvalue of -L in the psi-weighted inner product.

    The two lowest eigenpairs of the symmetrized tridiagonal matrix are computed; the lowest is the
    null direction psi and is dropped. The returned eigenvector is mapped back to nodal values and
    must be psi-orthogonal to psi, i.e. have zero integral.

    Raises:
        NumericalFailureError: If the eigenpair residual, the null eigenvalue or the deflation check
            exceeds tolerance
    """
    diag, off, similarity = _symmetric_tridiagonal(assembly.species)
    scale = max(float(np.max(np.abs(diag))), 1.0)
    try:
        values, vectors = eigh_tridiagonal(diag, off, select="i", select_range=(0, 1))
    except np.linalg.LinAlgError as e:
        raise NumericalFailureError(f"Tridiagonal eigensolve failed: {e}", residual=float("inf")) from e

    vector = vectors[:, 1]
    applied = diag * vector
    applied[:-1] += off * vector[1:]
    applied[1:] += off * vector[:-1]
    residual = float(np.linalg.norm(applied - values[1] * vector)) / scale
    null_value = float(values[0])

    if residual > EIGEN_RESIDUAL_TOL or abs(null_value) > EIGEN_RESIDUAL_TOL * scale:
        raise NumericalFailureError(
            f"Eigensolve for theta={assembly.theta} did not converge (null eigenvalue {null_value:.3e})",
            residual=residual,
        )

    mode = vector / similarity
    leak = abs(float(integrate_values(mode, psi.grid))) / float(np.sqrt(weighted_inner(mode, mode, psi)))
    if leak > 1e-8:
        raise NumericalFailureError(f"Second eigenvector is not orthogonal to psi (leak {leak:.3e})", residual=leak)

    logger.debug(f"lambda_numeric={values[1]:.6g} (bound {assembly.lambda_bound:.6g}, residual {residual:.2e})")
    return EigenResult(value=float(values[1]), null_value=null_value, residual=residual, eigenvector=mode)


def weighted_inner(u: np.ndarray, v: np.ndarray, psi: ScalarField) -> float:
    """<u, v>_psi = integral of u psi^-1 v."""
    return float(integrate_values(u * v / psi.values, psi.grid))
