"""Tests for the four-condition pipeline, the hierarchical shortcut and the front ends."""

import numpy as np
import pytest

from rd_contract.core.certificates import (
    box_probes,
    certify_hierarchical,
    certify_inputs,
    certify_linear_system,
    certify_nonlinear,
    linear_inputs,
    lyapunov_metric,
)
from rd_contract.core.errors import InvalidParameterError, PremiseViolationError
from rd_contract.core.models import (
    TWO_SPECIES_MATRIX,
    two_species_diffusion,
    two_species_margins,
    zeta_upper_bound,
)
from rd_contract.types.certificate import CertificateMode, GammaMode, StateBox
from rd_contract.types.config import LambdaSource, SamplingSettings
from rd_contract.types.diffusion import DiffusionSpec
from rd_contract.types.grid import ScalarField


def _two_species_report(zeta: float, r: float, grid, mode: CertificateMode = CertificateMode.HIERARCHICAL_1):
    return certify_linear_system(
        lambda _t, _x: TWO_SPECIES_MATRIX,
        two_species_diffusion(zeta, r, grid),
        lyapunov_metric(TWO_SPECIES_MATRIX),
        mode=mode,
        pointwise_gamma=True,
    )


@pytest.mark.parametrize(
    ("zeta", "certified"),
    [
        (2.2, True),
        (3.0, True),
        (1.8, False),
        (1.0, False),
    ],
)
def test_hierarchical_certificate_without_crowding(grid, zeta, certified):
    """Verify the r = 0 two-species system is certified exactly when zeta > 2."""
    report = _two_species_report(zeta, 0.0, grid)

    assert report.certified is certified
    assert report.mode == CertificateMode.HIERARCHICAL_1
    assert report.beta == 0.0
    assert report.lambda1 > 0.0
    assert report.gamma_mode == GammaMode.POINTWISE
    if certified:
        assert report.lambda_star == pytest.approx(min(report.lambda1, report.lambda2))


@pytest.mark.parametrize("zeta", [1.0, 3.0])
def test_report_dump_carries_verdict(grid, zeta):
    """Verify the JSON dump of a report includes the certified verdict."""
    report = _two_species_report(zeta, 0.0, grid)
    dumped = report.model_dump(mode="json")

    assert dumped["certified"] is report.certified
    assert dumped["certified"] is (zeta > 2.0)


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
def test_hierarchical_threshold_tracks_crowding_bound(grid, r):
    """Verify the certified region starts at 2 / nu(r) for crowded second species."""
    bound = zeta_upper_bound(r, grid)

    assert _two_species_report(1.02 * bound, r, grid).certified
    assert not _two_species_report(0.98 * bound, r, grid).certified


def test_margins_use_analytic_floors(grid):
    """Verify the diffusion margins are (10 zeta, zeta nu(r) / 4)."""
    spec = two_species_diffusion(3.0, 0.5, grid)
    inputs = linear_inputs(lambda _x, _p: TWO_SPECIES_MATRIX, spec, np.eye(2), None, StateBox.empty())

    np.testing.assert_allclose(inputs.lambda_diag, two_species_margins(3.0, 0.5, grid), rtol=1e-12)


def test_averaged_block_is_reaction_matrix(grid):
    """Verify integral(A Psi) = A because every profile integrates to one."""
    spec = two_species_diffusion(3.0, 0.7, grid)
    inputs = linear_inputs(lambda _x, _p: TWO_SPECIES_MATRIX, spec, np.eye(2), None, StateBox.empty())

    np.testing.assert_allclose(inputs.jac_f1(np.zeros(0)), TWO_SPECIES_MATRIX, atol=1e-12)


def test_mode_two_premise_holds_only_without_crowding(grid):
    """Verify dg2/dw_bar vanishes for uniform profiles and is caught otherwise."""
    report = _two_species_report(3.0, 0.0, grid, mode=CertificateMode.HIERARCHICAL_2)
    assert report.premise == "dg2/dw_bar vanishes"

    with pytest.raises(PremiseViolationError, match=r"depends on the averages") as exc_info:
        _two_species_report(3.0, 0.5, grid, mode=CertificateMode.HIERARCHICAL_2)
    assert exc_info.value.probe == ()


def test_mode_one_premise_fails_for_varying_coupling(grid):
    """Verify a space-dependent A makes the averages depend on the deviations."""
    spec = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    inputs = linear_inputs(
        lambda x, _p: (-1.0 + x)[:, None, None], spec, np.eye(1), np.ones(1), StateBox.empty()
    )
    with pytest.raises(PremiseViolationError, match=r"depends on the deviations"):
        certify_hierarchical(1, inputs)


def test_hierarchical_rejects_unknown_mode(grid):
    """Verify only modes 1 and 2 exist."""
    spec = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    inputs = linear_inputs(lambda _x, _p: -np.ones((1, 1)), spec, np.eye(1), None, StateBox.empty())
    with pytest.raises(InvalidParameterError, match=r"must be 1 or 2"):
        certify_hierarchical(3, inputs)


def test_full_theorem_on_two_species_system(grid):
    """Verify the full test reports a coupling for crowded profiles and stays consistent."""
    report = certify_linear_system(
        lambda _t, _x: TWO_SPECIES_MATRIX,
        two_species_diffusion(6.0, 0.5, grid),
        lyapunov_metric(TWO_SPECIES_MATRIX),
        pointwise_gamma=True,
    )

    assert report.mode == CertificateMode.FULL_THEOREM
    assert report.beta > 0.0
    assert report.sigma == pytest.approx(report.beta / (2.0 * np.sqrt(report.m1_star * report.m2_star)))
    assert report.certified == all(report.condition_pass)
    assert (report.lambda_star is None) != report.certified


def test_numeric_lambda_source_is_not_smaller(grid):
    """Verify the numeric eigenvalue margin is at least the floor for a varying profile."""
    spec = two_species_diffusion(3.0, 1.0, grid)
    floor = linear_inputs(lambda _x, _p: TWO_SPECIES_MATRIX, spec, np.eye(2), None, StateBox.empty())
    numeric = linear_inputs(
        lambda _x, _p: TWO_SPECIES_MATRIX,
        spec,
        np.eye(2),
        None,
        StateBox.empty(),
        lambda_source=LambdaSource.NUMERIC,
    )

    assert np.all(numeric.lambda_diag >= 0.98 * floor.lambda_diag)


def test_time_varying_linear_system_is_sampled(grid):
    """Verify a time box is probed and the worst time is reported."""
    spec = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    report = certify_linear_system(
        lambda t, x: np.full((x.size, 1, 1), -1.0 + 0.5 * np.sin(t)),
        spec,
        np.eye(1),
        time_box=(0.0, 2.0),
        sampling=SamplingSettings(n_random=16, seed=1),
    )

    assert report.certified
    assert report.lambda1 == pytest.approx(1.0 - 0.5 * np.sin(2.0), abs=0.05)
    assert report.diagnostics[0].worst_probe is not None


def test_nonlinear_certificate_for_cubic_damping(grid):
    """Verify f = -z - z^3 is certified on [-1, 1] with lambda1 = 1 and no coupling."""
    spec = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    report = certify_nonlinear(
        lambda _t, _x, z: -z - z**3,
        lambda _t, _x, z: (-1.0 - 3.0 * z**2).T[:, :, None],
        spec,
        np.eye(1),
        np.ones(1),
        StateBox.from_bounds({"z": (-1.0, 1.0)}),
    )

    assert report.certified
    assert report.lambda1 == pytest.approx(1.0)
    assert report.lambda2 == pytest.approx(np.pi**2 + 1.0)
    assert report.beta == pytest.approx(0.0, abs=1e-12)


def test_nonlinear_certificate_requires_equilibrium_at_zero(grid):
    """Verify f(0) != 0 is a premise violation."""
    spec = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    with pytest.raises(PremiseViolationError, match=r"f\(t, x, 0\)"):
        certify_nonlinear(
            lambda _t, _x, z: 1.0 - z,
            lambda _t, x, _z: -np.ones((x.size, 1, 1)),
            spec,
            np.eye(1),
            None,
            StateBox.from_bounds({"z": (-1.0, 1.0)}),
        )


def test_nonlinear_box_must_match_species(grid):
    """Verify one box interval per species."""
    spec = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    with pytest.raises(InvalidParameterError, match=r"2 dimensions for 1 species"):
        certify_nonlinear(
            lambda _t, _x, z: -z,
            lambda _t, x, _z: -np.ones((x.size, 1, 1)),
            spec,
            np.eye(1),
            None,
            StateBox.from_bounds({"a": (0.0, 1.0), "b": (0.0, 1.0)}),
        )


def test_full_pipeline_records_sampling(grid):
    """Verify the report carries the sampling settings it was computed with."""
    spec = DiffusionSpec.from_pairs([(0.5, ScalarField(grid, np.ones(grid.n)))])
    sampling = SamplingSettings(n_random=4, seed=7)
    inputs = linear_inputs(lambda _x, _p: -np.ones((1, 1)), spec, np.eye(1), None, StateBox.empty())
    report = certify_inputs(inputs, sampling)

    assert report.sampling == sampling
    assert report.lambda_source == LambdaSource.FLOOR


@pytest.mark.parametrize(
    ("bounds", "n_random", "expected_rows"),
    [
        ({}, 5, 1),
        ({"a": (0.0, 1.0)}, 0, 1 + 2 + 2),
        ({"a": (0.0, 1.0), "b": (-1.0, 1.0)}, 3, 1 + 4 + 4 + 3),
    ],
)
def test_box_probe_counts(bounds, n_random, expected_rows):
    """Verify centre, corners, face midpoints and random draws are all present."""
    box = StateBox.from_bounds(bounds) if bounds else StateBox.empty()
    probes = box_probes(box, SamplingSettings(n_random=n_random, seed=0))

    assert probes.shape == (expected_rows, box.dim)


def test_box_probes_skip_corners_in_high_dimension():
    """Verify boxes above ten dimensions drop the corner enumeration."""
    box = StateBox(lower=np.zeros(11), upper=np.ones(11))
    probes = box_probes(box, SamplingSettings(n_random=2))

    assert probes.shape == (1 + 22 + 2, 11)


def test_box_probes_are_seeded():
    """Verify equal seeds give equal probes and the probes stay in the box."""
    box = StateBox.from_bounds({"a": (0.0, 1.0), "b": (-2.0, 2.0)})
    first = box_probes(box, SamplingSettings(n_random=10, seed=4))
    second = box_probes(box, SamplingSettings(n_random=10, seed=4))

    np.testing.assert_array_equal(first, second)
    assert np.all(first >= box.lower)
    assert np.all(first <= box.upper)


def test_empty_state_box_is_rejected():
    """Verify lower > upper is rejected."""
    with pytest.raises(InvalidParameterError, match=r"Empty state box"):
        StateBox.from_bounds({"a": (1.0, 0.0)})
