"""Tests for the IMEX integrator."""

import math

import numpy as np
import pytest

from rd_contract.core.errors import IntegrationFailureError, InvalidSpecError
from rd_contract.core.grid import integrate_values
from rd_contract.core.models import build_example_3_1, build_translation_model, translation_initial_state
from rd_contract.core.simulation import build_system, default_time_step, integrate, reaction_spectral_radius
from rd_contract.types.diffusion import DiffusionSpec
from rd_contract.types.grid import ScalarField
from rd_contract.types.simulation import ReactionSpec
from rd_contract.types.translation import TranslationParams


@pytest.mark.parametrize("theta", [0.0, 0.5, 1.0])
def test_pure_diffusion_conserves_mass(make_diffusion_only, grid, theta):
    """Verify integral(z) is unchanged by diffusion steps."""
    system = make_diffusion_only(theta, lambda x: 1.0 + 0.5 * np.cos(np.pi * x))
    z0 = (1.0 + grid.nodes + np.sin(7.0 * grid.nodes))[None, :]
    traj = integrate(system, z0, t_end=5.0, dt=0.05, sample_every=10)

    masses = traj.averages()[:, 0]
    np.testing.assert_allclose(masses, masses[0], rtol=0.0, atol=1e-10)


def test_pure_diffusion_relaxes_to_psi(make_diffusion_only, grid):
    """Verify theta = 1 diffusion relaxes to the no-flux profile times the initial mass."""
    system = make_diffusion_only(1.0, lambda x: 1.0 + x)
    z0 = np.ones((1, grid.n))
    traj = integrate(system, z0, t_end=20.0, dt=0.1)

    expected = system.psi.matrix[0] * float(integrate_values(z0[0], grid))
    np.testing.assert_allclose(traj.final_state[0], expected, rtol=1e-6)


def test_zero_state_stays_zero(grid):
    """Verify the zero state is an equilibrium of a linear system."""
    system = build_example_3_1(1e-2, 0.5, grid)
    traj = integrate(system, np.zeros((1, grid.n)), t_end=1.0, dt=0.1)

    assert np.all(traj.states == 0.0)
    assert np.all(traj.norms == 0.0)


def test_uniform_decay_matches_explicit_factor(grid):
    """Verify a constant rate a = -epsilon decays by (1 - epsilon dt) per step on a uniform state."""
    epsilon = 0.2
    system = build_example_3_1(epsilon, 0.0, grid)
    traj = integrate(system, np.ones((1, grid.n)), t_end=2.0, dt=0.1)

    np.testing.assert_allclose(traj.final_state[0], (1.0 - epsilon * 0.1) ** 20, rtol=1e-10)


def test_sampling_includes_endpoints(grid):
    """Verify sampling keeps t = 0, every k-th step and the final step."""
    system = build_example_3_1(1e-2, 0.1, grid)
    traj = integrate(system, np.ones((1, grid.n)), t_end=1.05, dt=0.1, sample_every=4)

    assert traj.times[0] == 0.0
    assert traj.times[-1] == pytest.approx(1.05)
    assert np.all(np.diff(traj.times) > 0.0)
    assert traj.states.shape == (traj.times.size, 1, grid.n)


def test_default_time_step_is_capped(grid):
    """Verify dt = min(0.1, 0.1 / rho)."""
    slow = build_example_3_1(1e-2, 0.0, grid)
    assert default_time_step(slow, np.ones((1, grid.n))) == pytest.approx(0.1)

    fast = build_example_3_1(5.0, 0.0, grid)
    assert default_time_step(fast, np.ones((1, grid.n))) == pytest.approx(0.02)


def test_translation_spectral_radius(grid):
    """Verify the rank-one binding Jacobian has |eigenvalue| = m/K + R/K + 1 at a uniform state."""
    system = build_translation_model(TranslationParams(), grid)
    state = np.vstack([np.full(grid.n, 1.0), np.full(grid.n, 2.0), np.zeros(grid.n)])

    assert reaction_spectral_radius(system, state) == pytest.approx(4.0)
    assert default_time_step(system, translation_initial_state(grid)) == pytest.approx(0.1 / 3.0)


def test_negative_concentration_fails(grid):
    """Verify a nonnegative system that overshoots below zero raises with the failure time."""
    diffusion = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    reaction = ReactionSpec(
        n_species=1,
        f=lambda _t, _x, z: -50.0 * z,
        jacobian=lambda _t, x, _z: np.full((x.size, 1, 1), -50.0),
        linear=True,
        nonnegative=True,
    )
    system = build_system(diffusion, reaction)

    with pytest.raises(IntegrationFailureError, match=r"Concentration dropped") as exc_info:
        integrate(system, np.ones((1, grid.n)), t_end=1.0, dt=0.1)
    assert exc_info.value.time == pytest.approx(0.1)


def test_non_finite_state_fails(grid):
    """Verify a blow-up to inf is reported instead of propagated."""
    diffusion = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    reaction = ReactionSpec(
        n_species=1,
        f=lambda _t, _x, z: z**8,
        jacobian=lambda _t, _x, z: (8.0 * z**7).T[:, :, None],
    )
    system = build_system(diffusion, reaction)

    with np.errstate(over="ignore", invalid="ignore"), pytest.raises(IntegrationFailureError, match=r"Non-finite state"):
        integrate(system, np.full((1, grid.n), 10.0), t_end=10.0, dt=0.1)


@pytest.mark.parametrize(
    ("kwargs", "match"),
    [
        ({"t_end": 0.0}, r"t_end must be positive"),
        ({"t_end": 1.0, "sample_every": 0}, r"sample_every"),
        ({"t_end": 1.0, "dt": -0.1}, r"dt must be positive"),
    ],
)
def test_integrate_rejects_bad_arguments(grid, kwargs, match):
    """Verify invalid run settings are rejected before stepping."""
    system = build_example_3_1(1e-2, 0.1, grid)
    with pytest.raises(ValueError, match=match):
        integrate(system, np.ones((1, grid.n)), **kwargs)


def test_integrate_rejects_wrong_state_shape(grid):
    """Verify the initial state must match (species, n)."""
    system = build_example_3_1(1e-2, 0.1, grid)
    with pytest.raises(ValueError, match=r"Initial state has shape"):
        integrate(system, np.ones((2, grid.n)), t_end=1.0)


def test_species_count_mismatch_is_rejected(grid):
    """Verify diffusion and kinetics must describe the same species."""
    diffusion = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))] * 2)
    reaction = ReactionSpec(n_species=1, f=lambda _t, _x, z: z, jacobian=lambda _t, x, _z: np.ones((x.size, 1, 1)))
    with pytest.raises(InvalidSpecError, match=r"2 species but the reaction has 1"):
        build_system(diffusion, reaction)


def test_decay_rate_of_uniform_state(grid):
    """Verify the log of the uniform solution falls at rate ~epsilon."""
    system = build_example_3_1(1e-2, 0.0, grid)
    traj = integrate(system, np.ones((1, grid.n)), t_end=10.0, dt=0.1)

    assert math.log(traj.norms[-1]) / 10.0 == pytest.approx(-1e-2, rel=1e-3)
