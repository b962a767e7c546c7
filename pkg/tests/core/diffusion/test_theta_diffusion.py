"""Tests for the theta-diffusion operator: null space, conservation, symmetry and spectrum."""

import math

import numpy as np
import pytest

from rd_contract.core.diffusion import (
    LAMBDA_STAR,
    apply_flux,
    assemble_operator,
    eigenvalue_lower_bound,
    psi_weight,
    psi_weights,
    second_eigenvalue_numeric,
    weighted_inner,
)
from rd_contract.core.errors import InvalidSpecError
from rd_contract.core.grid import integrate, integrate_values
from rd_contract.types.diffusion import DiffusionSpec, SpeciesDiffusion
from rd_contract.types.grid import ScalarField

THETAS = [0.0, 0.25, 0.5, 0.75, 1.0]


@pytest.fixture
def smooth_d(make_field):
    """Strictly positive, non-constant diffusivity."""
    return make_field(lambda x: 1.0 + 0.5 * np.sin(2.0 * np.pi * x) + 0.3 * x)


@pytest.mark.parametrize("theta", THETAS)
def test_psi_is_null_vector(smooth_d, theta):
    """Verify L psi = 0 up to rounding for every theta."""
    assembly = assemble_operator(theta, smooth_d)
    residual = np.abs(assembly.apply(assembly.psi.values))
    scale = float(np.max(np.abs(assembly.matrix.diagonal()))) * assembly.psi.max

    assert float(residual.max()) <= 1e-11 * scale
    assert integrate(assembly.psi) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("theta", THETAS)
def test_operator_conserves_integral(smooth_d, theta, grid):
    """Verify integral(L y) = 0 for an arbitrary y."""
    assembly = assemble_operator(theta, smooth_d)
    y = np.exp(grid.nodes) * (1.0 + np.cos(3.0 * grid.nodes))
    ly = assembly.apply(y)

    assert abs(float(grid.quad_weights @ ly)) <= 1e-12 * max(1.0, float(np.max(np.abs(ly))))


@pytest.mark.parametrize("theta", THETAS)
def test_operator_is_self_adjoint_in_psi_inner_product(smooth_d, theta, grid):
    """Verify <u, L v>_psi = <L u, v>_psi."""
    assembly = assemble_operator(theta, smooth_d)
    psi = assembly.psi
    u = np.sin(2.0 * grid.nodes) + grid.nodes
    v = np.cos(5.0 * grid.nodes)

    left = float(np.sum(grid.quad_weights * u * assembly.apply(v) / psi.values))
    right = float(np.sum(grid.quad_weights * assembly.apply(u) * v / psi.values))

    assert left == pytest.approx(right, rel=1e-10, abs=1e-10)


def test_fickian_psi_is_uniform(smooth_d):
    """Verify theta = 1/2 gives the uniform profile whatever d is."""
    np.testing.assert_allclose(psi_weight(0.5, smooth_d).values, 1.0, rtol=1e-13)


def test_theta_one_psi_follows_d(smooth_d):
    """Verify theta = 1 gives psi proportional to d."""
    psi = psi_weight(1.0, smooth_d)
    ratio = psi.values / smooth_d.values
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


@pytest.mark.parametrize("theta", [0.5, 1.0])
def test_constant_d_matches_laplacian_spectrum(make_field, theta):
    """Verify constant d gives lambda = pi^2 d, both as floor and numerically."""
    d = make_field(lambda x: np.full_like(x, 0.7))
    assembly = assemble_operator(theta, d)

    assert assembly.lambda_bound == pytest.approx(0.7 * LAMBDA_STAR, rel=1e-12)
    assert assembly.lambda_numeric == pytest.approx(0.7 * LAMBDA_STAR, rel=1e-3)


def test_fine_grid_eigenvalue_converges(fine_grid):
    """Verify the unit-diffusivity eigenvalue approaches pi^2 on n = 500."""
    d = ScalarField(fine_grid, np.ones(fine_grid.n))
    assert assemble_operator(0.5, d).lambda_numeric == pytest.approx(math.pi**2, rel=1e-5)


RANDOM_PROFILE_SEEDS = range(20)


def _random_profile(grid, seed: int) -> ScalarField:
    """Strictly positive diffusivity: a random scale times exp of a few random Fourier modes."""
    rng = np.random.default_rng(seed)
    k = np.arange(1, 5)[:, None]
    a, b = rng.uniform(-0.4, 0.4, size=(2, 4, 1))
    log_d = np.sum(a * np.cos(k * np.pi * grid.nodes) + b * np.sin(k * np.pi * grid.nodes), axis=0)
    return ScalarField(grid, rng.uniform(0.5, 2.0) * np.exp(log_d))


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("seed", RANDOM_PROFILE_SEEDS)
def test_floor_is_below_numeric_eigenvalue(fine_grid, seed, theta):
    """Verify the floor bounds the discrete second eigenvalue for random positive profiles.

    On the grid the Neumann Laplacian gap is (2/h)^2 sin^2(pi h / 2) instead of pi^2, so the floor
    scaled by that ratio holds to rounding, and the floor itself holds within the 2% allowance.
    """
    d = _random_profile(fine_grid, seed)
    numeric = assemble_operator(theta, d).lambda_numeric
    floor = eigenvalue_lower_bound(theta, d)
    h = fine_grid.h
    discrete_ratio = (2.0 / h) ** 2 * math.sin(0.5 * math.pi * h) ** 2 / LAMBDA_STAR

    assert floor * discrete_ratio <= numeric * (1.0 + 1e-9)
    assert floor <= numeric * 1.02


def test_second_eigenvector_is_orthogonal_to_psi(smooth_d):
    """Verify the returned mode is psi-orthogonal to psi, i.e. has zero integral."""
    assembly = assemble_operator(1.0, smooth_d)
    eigen = second_eigenvalue_numeric(assembly, assembly.psi)

    norm = math.sqrt(weighted_inner(eigen.eigenvector, eigen.eigenvector, assembly.psi))
    assert abs(weighted_inner(eigen.eigenvector, assembly.psi.values, assembly.psi)) <= 1e-8 * norm
    assert eigen.residual <= 1e-10


def test_flux_vanishes_on_boundary_and_for_psi(smooth_d):
    """Verify boundary faces carry zero flux and psi carries none anywhere."""
    psi = psi_weight(0.25, smooth_d)
    flux = apply_flux(0.25, smooth_d, psi)

    assert flux.values.shape == (smooth_d.grid.n + 1,)
    assert flux.values[0] == 0.0
    assert flux.values[-1] == 0.0
    np.testing.assert_allclose(flux.values, 0.0, atol=1e-10)


def test_flux_divergence_reproduces_operator(smooth_d, grid):
    """Verify (L y)_i = (J_{i-1/2} - J_{i+1/2}) / w_i."""
    y = ScalarField(grid, 1.0 + grid.nodes**2)
    flux = apply_flux(0.75, smooth_d, y)
    divergence = -np.diff(flux.values) / grid.quad_weights

    np.testing.assert_allclose(assemble_operator(0.75, smooth_d).apply(y.values), divergence, rtol=1e-10, atol=1e-8)


def test_triplets_are_row_major_tridiagonal(make_field):
    """Verify exported entries are sorted and confined to three diagonals."""
    triplets = assemble_operator(0.5, make_field(lambda x: 1.0 + x)).to_triplets()

    keys = [(row, col) for row, col, _ in triplets]
    assert keys == sorted(keys)
    assert all(abs(row - col) <= 1 for row, col, _ in triplets)
    assert len(triplets) == 3 * 101 - 2


def test_report_carries_spectrum(make_field):
    """Verify the eigen report mirrors the assembly."""
    assembly = assemble_operator(1.0, make_field(lambda x: 2.0 + x))
    report = assembly.report()

    assert report.theta == 1.0
    assert report.n == 101
    assert report.lambda_bound <= report.lambda_numeric
    assert abs(report.null_eigenvalue) < 1e-6


@pytest.mark.parametrize("theta", [-0.1, 1.5])
def test_theta_out_of_range_is_rejected(make_field, theta):
    """Verify theta outside [0, 1] is rejected."""
    with pytest.raises(InvalidSpecError, match=r"theta must lie in \[0, 1\]"):
        assemble_operator(theta, make_field(lambda x: np.ones_like(x)))


def test_nonpositive_diffusivity_is_rejected(make_field):
    """Verify a diffusivity touching zero is rejected."""
    with pytest.raises(InvalidSpecError, match=r"strictly positive"):
        SpeciesDiffusion(theta=0.5, d=make_field(lambda x: x))


def test_psi_weights_stack_species(make_field):
    """Verify the stacked profiles each integrate to one."""
    spec = DiffusionSpec.from_pairs([(0.5, make_field(lambda x: 1.0 + x)), (1.0, make_field(lambda x: 2.0 - x))])
    psi = psi_weights(spec)

    assert psi.matrix.shape == (2, 101)
    np.testing.assert_allclose(integrate_values(psi.matrix, spec.grid), 1.0, atol=1e-12)
    assert psi.inf > 0.0
