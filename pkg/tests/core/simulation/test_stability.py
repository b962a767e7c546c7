"""Tests for log-norm slopes, stability classification and critical-parameter bisection."""

import pickle
from functools import partial

import numpy as np
import pytest

from rd_contract.core.certificates import small_omega_threshold
from rd_contract.core.errors import DegenerateWindowError, NoBracketError
from rd_contract.core.models import (
    build_example_3_1,
    build_example_3_2,
    ramp_initial_state,
    uniform_initial_state,
)
from rd_contract.core.simulation import (
    SlopeProbe,
    classify_slope,
    critical_parameter,
    integrate,
    log_norm_slope,
)
from rd_contract.types.simulation import Stability, Trajectory


def _synthetic_trajectory(grid, rate: float) -> Trajectory:
    times = np.linspace(0.0, 10.0, 21)
    norms = 2.0 * np.exp(rate * times)
    states = np.ones((times.size, 1, grid.n)) * norms[:, None, None]
    return Trajectory(grid=grid, times=times, states=states, norms=norms)


def test_slope_of_exponential_is_exact(grid):
    """Verify the fitted slope of log(2 exp(rate t)) is the rate."""
    traj = _synthetic_trajectory(grid, -0.37)
    assert log_norm_slope(traj, 2.0, 8.0) == pytest.approx(-0.37, rel=1e-10)


def test_slope_window_needs_two_samples(grid):
    """Verify a window holding a single sample is rejected."""
    traj = _synthetic_trajectory(grid, 0.1)
    with pytest.raises(DegenerateWindowError, match=r"holds 1 samples"):
        log_norm_slope(traj, 4.9, 5.1)


def test_slope_of_zero_norm_is_rejected(grid):
    """Verify a vanishing norm in the window cannot be logged."""
    system = build_example_3_1(1e-2, 0.1, grid)
    traj = integrate(system, np.zeros((1, grid.n)), t_end=2.0, dt=0.1)
    with pytest.raises(DegenerateWindowError, match=r"Zero or non-finite state norm"):
        log_norm_slope(traj, 1.0, 2.0)


def test_deviation_slope_needs_profiles(grid):
    """Verify the deviation norm requires the no-flux profiles."""
    traj = _synthetic_trajectory(grid, 0.1)
    with pytest.raises(ValueError, match=r"needs the no-flux profiles"):
        log_norm_slope(traj, 0.0, 10.0, norm="deviation")


@pytest.mark.parametrize(
    ("slope", "expected"),
    [
        (-1e-2, Stability.STABLE),
        (2e-3, Stability.UNSTABLE),
        (5e-5, Stability.NEUTRAL),
        (-9e-5, Stability.NEUTRAL),
    ],
)
def test_classify_slope(slope, expected):
    """Verify slopes within 1e-4 of zero are neutral."""
    assert classify_slope(slope) == expected


def test_critical_parameter_finds_sign_change():
    """Verify bisection stops within tol of the root of a monotone slope function."""
    assert critical_parameter(lambda p: p - 0.3, 0.0, 1.0, 1e-3) == pytest.approx(0.3, abs=1e-3)


def test_critical_parameter_without_bracket():
    """Verify same-sign endpoints raise NoBracketError."""
    with pytest.raises(NoBracketError, match=r"same sign"):
        critical_parameter(lambda p: p + 1.0, 0.0, 1.0, 1e-3)


def test_critical_parameter_accepts_neutral_endpoint():
    """Verify an endpoint with a neutral slope is returned directly."""
    assert critical_parameter(lambda p: p * 1e-5, 0.0, 1.0, 1e-3) == 0.0


def test_slope_probe_is_picklable(grid):
    """Verify the probe survives pickling so it can go to worker processes."""
    probe = SlopeProbe(
        builder=partial(build_example_3_1, 1e-2, grid=grid),
        initial_state=uniform_initial_state,
        t_end=2.0,
        window=(1.0, 2.0),
    )
    restored = pickle.loads(pickle.dumps(probe))
    assert restored(0.1) == pytest.approx(probe(0.1))


@pytest.mark.parametrize(
    ("omega", "expected"),
    [
        (0.01, Stability.STABLE),
        (0.1, Stability.UNSTABLE),
        (1.0, Stability.UNSTABLE),
    ],
)
def test_scalar_system_stability_at_small_diffusion(fine_grid, omega, expected):
    """Verify epsilon = 1e-2: stable for omega = 0.01, unstable once the rate peak outgrows diffusion."""
    probe = SlopeProbe(builder=partial(build_example_3_1, 1e-2, grid=fine_grid), initial_state=uniform_initial_state)
    assert classify_slope(probe(omega)) == expected


@pytest.mark.parametrize(
    ("zeta", "expected"),
    [
        (1.0, Stability.UNSTABLE),
        (3.0, Stability.STABLE),
    ],
)
def test_two_species_stability_without_crowding(grid, zeta, expected):
    """Verify the r = 0 two-species system is Turing-unstable at zeta = 1 and stable at zeta = 3."""
    probe = SlopeProbe(
        builder=partial(build_example_3_2, r=0.0, grid=grid),
        initial_state=ramp_initial_state,
        t_end=40.0,
        window=(20.0, 40.0),
        norm="deviation",
    )
    assert classify_slope(probe(zeta)) == expected


def test_two_species_critical_zeta_without_crowding(grid):
    """Verify the bisected zeta_cr at r = 0 matches the root of 10 zeta^2 - 19 zeta + 2 = 0."""
    probe = SlopeProbe(
        builder=partial(build_example_3_2, r=0.0, grid=grid),
        initial_state=ramp_initial_state,
        t_end=60.0,
        window=(40.0, 60.0),
        norm="deviation",
    )
    expected = (19.0 + np.sqrt(281.0)) / 20.0

    assert critical_parameter(probe, 1.0, 3.0, 0.01) == pytest.approx(expected, abs=0.05)


@pytest.mark.slow
def test_scalar_critical_omega_lies_above_certified_bound(fine_grid):
    """Verify the certified region (sqrt(33) - 3) epsilon sits inside the empirically stable range."""
    probe = SlopeProbe(builder=partial(build_example_3_1, 1e-2, grid=fine_grid), initial_state=uniform_initial_state)
    omega_cr = critical_parameter(probe, 0.01, 0.1, 1e-3)

    assert small_omega_threshold(1e-2) < omega_cr < 0.1
