"""Tests for the mesh, trapezoid quadrature and available-volume profiles."""

import math

import numpy as np
import pytest

from rd_contract.core.errors import InvalidGridError, InvalidParameterError, InvalidProfileError
from rd_contract.core.grid import (
    available_volume,
    integrate,
    integrate_values,
    l2_norm,
    make_uniform_grid,
    normalize_profile,
    nucleoid_density,
)
from rd_contract.types.grid import ScalarField


@pytest.mark.parametrize("n", [0, 1, 2])
def test_make_uniform_grid_rejects_small_n(n):
    """Verify grids with fewer than three nodes are rejected."""
    with pytest.raises(InvalidGridError, match=r"at least 3 nodes"):
        make_uniform_grid(n)


def test_make_uniform_grid_layout():
    """Verify endpoints, spacing and the halved end weights."""
    grid = make_uniform_grid(11)

    assert grid.nodes[0] == 0.0
    assert grid.nodes[-1] == 1.0
    assert grid.h == pytest.approx(0.1)
    assert grid.quad_weights[0] == pytest.approx(0.05)
    assert grid.quad_weights[5] == pytest.approx(0.1)
    assert grid.quad_weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert grid.half_nodes.shape == (10,)


def test_grid_arrays_are_read_only(grid):
    """Verify grid arrays cannot be modified in place."""
    with pytest.raises(ValueError, match=r"read-only"):
        grid.nodes[0] = 1.0


@pytest.mark.parametrize(
    ("fn", "expected"),
    [
        (lambda x: np.ones_like(x), 1.0),
        (lambda x: x, 0.5),
        (lambda x: 3.0 - 2.0 * x, 2.0),
    ],
)
def test_integrate_is_exact_for_linear_functions(make_field, fn, expected):
    """Verify the trapezoid rule integrates affine functions exactly."""
    assert integrate(make_field(fn)) == pytest.approx(expected, abs=1e-13)


def test_integrate_values_matches_weights(grid):
    """Verify integrate_values agrees with the explicit quadrature weights on stacked arrays."""
    values = np.vstack([np.cos(grid.nodes), grid.nodes**2])
    result = integrate_values(values, grid)

    assert result.shape == (2,)
    np.testing.assert_allclose(result, values @ grid.quad_weights, rtol=1e-13)


def test_l2_norm_sums_over_species(grid):
    """Verify the stacked L2 norm is the root of the summed squared norms."""
    values = np.vstack([np.ones(grid.n), 2.0 * np.ones(grid.n)])
    assert l2_norm(values, grid) == pytest.approx(math.sqrt(5.0), rel=1e-12)


def test_nucleoid_density_peaks_at_centre(grid):
    """Verify rho is largest at x* with value 1/2 and decays away from it."""
    rho = nucleoid_density(0.5, grid)

    assert rho.max == pytest.approx(0.5)
    assert grid.nodes[int(np.argmax(rho.values))] == pytest.approx(0.5)
    assert rho.values[0] < 1e-4


def test_available_volume_zero_radius_is_uniform(grid):
    """Verify a point-like molecule sees the whole domain."""
    profile = available_volume(0.0, 0.5, grid)
    np.testing.assert_array_equal(profile.v.values, np.ones(grid.n))
    assert profile.extrema_ratio == 1.0


def test_available_volume_dips_in_nucleoid(grid):
    """Verify v = exp(-r^2 rho) bottoms out at x* with value exp(-r^2 / 2)."""
    profile = available_volume(1.0, 0.5, grid)

    assert profile.v.min == pytest.approx(math.exp(-0.5))
    assert np.all(profile.v.values <= 1.0)
    assert profile.extrema_ratio > 1.0


@pytest.mark.parametrize(
    ("r", "x_star", "match"),
    [
        (-0.1, 0.5, r"nonnegative"),
        (0.5, 0.0, r"x_star"),
        (0.5, 1.2, r"x_star"),
    ],
)
def test_available_volume_rejects_bad_parameters(grid, r, x_star, match):
    """Verify negative radii and nucleoid centres outside the domain are rejected."""
    with pytest.raises(InvalidParameterError, match=match):
        available_volume(r, x_star, grid)


def test_normalize_profile_integrates_to_one(grid):
    """Verify v / integral(v) has unit integral."""
    v = available_volume(0.8, 0.5, grid).v
    assert integrate(normalize_profile(v)) == pytest.approx(1.0, abs=1e-13)


def test_normalize_profile_rejects_nonpositive(grid):
    """Verify profiles with a zero value cannot be normalized."""
    values = np.ones(grid.n)
    values[10] = 0.0
    with pytest.raises(InvalidProfileError, match=r"strictly positive"):
        normalize_profile(ScalarField(grid, values))


def test_scalar_field_shape_must_match_grid(grid):
    """Verify a field with the wrong length is rejected."""
    with pytest.raises(ValueError, match=r"grid expects"):
        ScalarField(grid, np.ones(grid.n + 1))
