"""Spatial translation model: mRNA and ribosomes bind into a complex while each species diffuses
toward the space it can access.

With r = m R / K - c the kinetics are f = v r for the stoichiometry v = [-1, -1, 1]; every
diffusivity is chi_i v_i(x) with theta = 1, so the no-flux profile of species i is v_hat_i.
"""

import math

import numpy as np
from scipy.integrate import solve_ivp

from rd_contract.core.certificates import (
    certified_boundary,
    diffusion_margins,
    small_gain,
)
from rd_contract.core.certificates.conditions import coupling_sigma
from rd_contract.core.diffusion import psi_weights
from rd_contract.core.errors import IntegrationFailureError, InvalidInvariantSetError
from rd_contract.core.grid import available_volume, integrate_values, normalize_profile
from rd_contract.core.simulation import RDSystem, build_system
from rd_contract.core.utils.logging import logger
from rd_contract.types.certificate import (
    CertificateInputs,
    CertificateMode,
    CertificateReport,
    ConditionDiagnostics,
    StateBox,
)
from rd_contract.types.config import LambdaSource
from rd_contract.types.diffusion import DiffusionSpec
from rd_contract.types.grid import ScalarField, SpatialGrid, VolumeProfile
from rd_contract.types.simulation import ReactionSpec, Trajectory
from rd_contract.types.translation import QssState, TranslationBounds, TranslationParams, TranslationProfiles

STOICHIOMETRY = np.array([-1.0, -1.0, 1.0])
SPECIES = ("m", "R", "c")
REDUCED_RTOL = 1e-10
REDUCED_ATOL = 1e-12

Triple = tuple[float, float, float]


def compute_bcf(v_m: VolumeProfile, v_r: VolumeProfile) -> float:
    """Binding correction factor integral(v_m v_r) / (integral(v_m) integral(v_r))."""
    grid = v_m.grid
    joint = integrate_values(v_m.v.values * v_r.v.values, grid)
    return float(joint / (integrate_values(v_m.v.values, grid) * integrate_values(v_r.v.values, grid)))


def translation_profiles(params: TranslationParams, grid: SpatialGrid) -> TranslationProfiles:
    """Available volume of each species on the grid, normalized profiles and the BCF."""
    v_m, v_r, v_c = (available_volume(r, params.x_star, grid) for r in params.radii)
    return TranslationProfiles(
        volumes=(v_m, v_r, v_c),
        normalized=(normalize_profile(v_m.v), normalize_profile(v_r.v), normalize_profile(v_c.v)),
        bcf=compute_bcf(v_m, v_r),
    )


def translation_diffusion(params: TranslationParams, profiles: TranslationProfiles) -> DiffusionSpec:
    """Theta = 1 for every species with d_i = chi_i v_i(x)."""
    grid = profiles.grid
    return DiffusionSpec.from_pairs(
        (1.0, ScalarField(grid, chi * p.v.values)) for chi, p in zip(params.chis, profiles.volumes, strict=True)
    )


def translation_reaction(K: float) -> ReactionSpec:  # noqa: N803
    """Bilinear binding with unit dissociation: f = v (m R / K - c)."""

    def f(_t: float, _x: np.ndarray, z: np.ndarray) -> np.ndarray:
        rate = z[0] * z[1] / K - z[2]
        return STOICHIOMETRY[:, None] * rate[None, :]

    def jacobian(_t: float, _x: np.ndarray, z: np.ndarray) -> np.ndarray:
        gradient = np.stack([z[1] / K, z[0] / K, -np.ones_like(z[0])], axis=-1)
        return STOICHIOMETRY[None, :, None] * gradient[:, None, :]

    return ReactionSpec(n_species=3, f=f, jacobian=jacobian, nonnegative=True)


def build_translation_model(params: TranslationParams, grid: SpatialGrid) -> RDSystem:
    """Three-species binding model with the diffusivities chi_i v_i(x)."""
    profiles = translation_profiles(params, grid)
    return build_system(translation_diffusion(params, profiles), translation_reaction(params.K))


def translation_initial_state(grid: SpatialGrid) -> np.ndarray:
    """m = 1 + cos(pi x)/2, R = 1 - cos(pi x)/2, c = 0."""
    wave = 0.5 * np.cos(np.pi * grid.nodes)
    return np.vstack([1.0 + wave, 1.0 - wave, np.zeros(grid.n)])


def qss_errors(state: np.ndarray, params: TranslationParams, profiles: TranslationProfiles) -> QssState:
    """Distance of a state from the reduced manifold m = v_hat_m m_bar, ..., c_bar = bcf m_bar R_bar / K."""
    grid = profiles.grid
    state = np.asarray(state, dtype=float)
    if state.shape != (3, grid.n):
        raise ValueError(f"Translation state has shape {state.shape}, expected {(3, grid.n)}")
    averages = integrate_values(state, grid)
    perp = state - profiles.normalized_matrix() * averages[:, None]
    m_bar, r_bar, c_bar = (float(v) for v in averages)
    return QssState(
        e_bar=c_bar - profiles.bcf * m_bar * r_bar / params.K,
        m_perp=ScalarField(grid, perp[0]),
        R_perp=ScalarField(grid, perp[1]),
        c_perp=ScalarField(grid, perp[2]),
    )


def _extrema(m: np.ndarray, r: np.ndarray, c: np.ndarray) -> tuple[Triple, Triple]:
    return (float(m.max()), float(r.max()), float(c.max())), (float(m.min()), float(r.min()), float(c.min()))


def invariant_set_bounds(
    params: TranslationParams,
    profiles: TranslationProfiles,
    initial_state: np.ndarray | None = None,
) -> TranslationBounds:
    """Pointwise and deviation bounds on the invariant set, and the certificate constants built on them.

    Args:
        params: Model constants, including the invariant-set size C*
        profiles: Available-volume profiles
        initial_state: When given, checked against sum_i (v_i^* / v_i,*) z_i(0, x) <= C*

    Raises:
        InvalidInvariantSetError: If the initial state is negative or outside the invariant set
    """
    v_sup, v_inf = _extrema(*(p.v.values for p in profiles.volumes))
    hat_sup, hat_inf = _extrema(*(p.values for p in profiles.normalized))
    ratios = np.array(v_sup) / np.array(v_inf)
    c_star = params.c_star

    if initial_state is not None:
        initial_state = np.asarray(initial_state, dtype=float)
        if float(initial_state.min()) < 0.0:
            raise InvalidInvariantSetError(f"Initial state has a negative value {float(initial_state.min()):.3e}")
        weighted = float(np.max(ratios @ initial_state))
        if weighted > c_star:
            raise InvalidInvariantSetError(
                f"Initial state needs C* >= {weighted:.6g}, but C* = {c_star:.6g}"
            )

    m_star = c_star * ratios[0]
    r_star = c_star * ratios[1]
    m_perp_star = max(hat_sup[0] * params.mrna_total, m_star)
    r_perp_star = max(hat_sup[1] * params.ribosome_total, r_star)
    eta_max = 1.0 + profiles.bcf * (params.mrna_total + params.ribosome_total) / params.K

    # bound on |u~| where the first two entries of u carry 1/K; without K this only holds for K = 1
    beta_u = math.sqrt(
        ((hat_sup[0] * params.mrna_total + 0.5 * m_perp_star) / params.K) ** 2
        + ((hat_sup[1] * params.ribosome_total + 0.5 * r_perp_star) / params.K) ** 2
        + 1.0
    )
    hat_m, hat_r = profiles.normalized[0].values, profiles.normalized[1].values
    grid = profiles.grid
    spread = ((hat_r - 1.0) * params.ribosome_total + 0.5 * r_perp_star) ** 2 + (
        (hat_m - 1.0) * params.mrna_total + 0.5 * m_perp_star
    ) ** 2
    beta_u_eta = math.sqrt(eta_max / params.K**2 * float(integrate_values(spread, grid)))
    beta_h = math.sqrt(float(integrate_values((hat_r - 1.0) ** 2 + (hat_m - 1.0) ** 2, grid))) / profiles.bcf

    return TranslationBounds(
        mrna_star=float(m_star),
        ribosome_star=float(r_star),
        mrna_perp_star=float(m_perp_star),
        ribosome_perp_star=float(r_perp_star),
        eta_max=eta_max,
        beta_u=beta_u,
        beta_u_eta=beta_u_eta,
        beta_h=beta_h,
        bcf=profiles.bcf,
        v_sup=v_sup,
        v_inf=v_inf,
        v_hat_sup=hat_sup,
        v_hat_inf=hat_inf,
    )


def invariant_set_violation(
    traj: Trajectory, params: TranslationParams, profiles: TranslationProfiles
) -> tuple[float, float]:
    """Largest excess of sum_i (v_i,* / v_i^*) z_i over C*, and the most negative concentration.

    Both are <= 0 (the second >= -1e-9 after rounding) for a run that stays in the invariant set.
    """
    weights = np.array([p.v.min / p.v.max for p in profiles.volumes])
    weighted = np.einsum("i,kin->kn", weights, traj.states)
    return float(weighted.max() - params.c_star), float(traj.states.min())


def translation_certificate(
    params: TranslationParams,
    profiles: TranslationProfiles,
    bounds: TranslationBounds,
    lambda_source: LambdaSource = LambdaSource.FLOOR,
) -> CertificateReport:
    """Closed-form certificate of the virtual error system.

    lambda1 = 1, lambda2 = Lambda_* - sqrt(3 Psi^*/Psi_*) beta_u and beta = beta_u_eta + beta_h; the
    system is certified when lambda2 > beta^2 / 4. ``sigma`` is reported with m1_* = m2_* = 1, the
    normalization of that test; the general sigma is kept in ``constants``.
    """
    margins = diffusion_margins(translation_diffusion(params, profiles), lambda_source)
    lambda_min = float(margins.min())
    lambda2 = lambda_min - math.sqrt(3.0 * bounds.psi_ratio) * bounds.beta_u
    beta = bounds.beta_u_eta + bounds.beta_h
    passed, rate = small_gain(1.0, lambda2, beta, 1.0, 1.0)
    condition_pass = (True, lambda2 > 0.0, math.isfinite(beta), passed)
    m2_general = 1.0 / max(bounds.v_hat_sup)

    logger.info(f"Translation certificate: Lambda_*={lambda_min:.6g} lambda2={lambda2:.6g} beta={beta:.6g}")
    return CertificateReport(
        mode=CertificateMode.FULL_THEOREM,
        lambda1=1.0,
        lambda2=lambda2,
        beta=beta,
        sigma=coupling_sigma(beta, 1.0, 1.0),
        lambda_star=rate if all(condition_pass) else None,
        m1_star=1.0,
        m2_star=1.0,
        condition_pass=condition_pass,
        diagnostics=(
            ConditionDiagnostics(name="lambda1", value=1.0, passed=True, note="M1 = 1, eta >= 1"),
            ConditionDiagnostics(name="lambda2", value=lambda2, passed=lambda2 > 0.0),
            ConditionDiagnostics(name="beta", value=beta, passed=condition_pass[2]),
            ConditionDiagnostics(name="small_gain", value=lambda2 - beta**2 / 4.0, passed=passed),
        ),
        lambda_source=lambda_source,
        constants={
            "Lambda_min": lambda_min,
            "psi_ratio": bounds.psi_ratio,
            "beta_u": bounds.beta_u,
            "beta_u_eta": bounds.beta_u_eta,
            "beta_h": bounds.beta_h,
            "eta_max": bounds.eta_max,
            "bcf": bounds.bcf,
            "m2_star_general": m2_general,
            "sigma_general": coupling_sigma(beta, 1.0, m2_general),
        },
    )


def translation_virtual_inputs(
    params: TranslationParams,
    profiles: TranslationProfiles,
    bounds: TranslationBounds,
    lambda_source: LambdaSource = LambdaSource.FLOOR,
) -> CertificateInputs:
    """Sampled inputs of the linear virtual error system over the box (m_bar, R_bar, m_perp, R_perp).

    f1 = -eta, f2 = v u_tilde^T, g1 = eta u^T and dg2/dw_bar = -v_hat_c v with M1 = 1, Gamma = I, where
    eta = 1 + bcf (m_bar + R_bar) / K and u = [(v_hat_r R_bar + R_perp/2), (v_hat_m m_bar + m_perp/2), 0] / K.
    """
    spec = translation_diffusion(params, profiles)
    hat = profiles.normalized_matrix()
    box = StateBox.from_bounds(
        {
            "m_bar": (0.0, params.mrna_total),
            "R_bar": (0.0, params.ribosome_total),
            "m_perp": (-bounds.mrna_perp_star, bounds.mrna_perp_star),
            "R_perp": (-bounds.ribosome_perp_star, bounds.ribosome_perp_star),
        }
    )
    K = params.K  # noqa: N806

    def eta(p: np.ndarray) -> float:
        return 1.0 + profiles.bcf * (p[0] + p[1]) / K

    def u(p: np.ndarray) -> np.ndarray:
        return np.stack(
            [(hat[1] * p[1] + 0.5 * p[3]) / K, (hat[0] * p[0] + 0.5 * p[2]) / K, np.zeros(hat.shape[1])],
            axis=-1,
        )

    def jac_f1(p: np.ndarray) -> np.ndarray:
        return np.array([[-eta(p)]])

    def jac_f2(_x: np.ndarray, p: np.ndarray) -> np.ndarray:
        u_tilde = u(p) - np.array([0.0, 0.0, 1.0])
        return STOICHIOMETRY[None, :, None] * u_tilde[:, None, :]

    def jac_g1(_x: np.ndarray, p: np.ndarray) -> np.ndarray:
        return eta(p) * u(p)[:, None, :]

    def jac_g2(_x: np.ndarray, _p: np.ndarray) -> np.ndarray:
        return -(hat[2][:, None] * STOICHIOMETRY[None, :])[:, :, None]

    return CertificateInputs(
        m1=np.eye(1),
        gamma=np.ones(3),
        psi=psi_weights(spec),
        lambda_diag=diffusion_margins(spec, lambda_source),
        state_box=box,
        jac_f1=jac_f1,
        jac_f2=jac_f2,
        jac_g1=jac_g1,
        jac_g2=jac_g2,
        lambda_source=lambda_source,
        metadata={"bcf": profiles.bcf, "eta_max": bounds.eta_max},
    )


def translation_scale_threshold(
    params: TranslationParams,
    grid: SpatialGrid,
    lo: float = 1.0,
    hi: float = 1e3,
    tol: float = 1e-3,
    lambda_source: LambdaSource = LambdaSource.FLOOR,
) -> float:
    """Smallest factor on every chi at which :func:`translation_certificate` passes.

    Raises:
        NoBracketError: If the verdict is the same at both ends
    """
    profiles = translation_profiles(params, grid)
    bounds = invariant_set_bounds(params, profiles)

    def certified(factor: float) -> bool:
        return translation_certificate(params.scaled(factor), profiles, bounds, lambda_source).certified

    threshold = certified_boundary(certified, lo, hi, tol)
    logger.info(f"Translation certificate holds for diffusivity scaling above {threshold:.6g}")
    return threshold


def reduced_qss_trajectory(
    params: TranslationParams,
    bcf: float,
    m_bar0: float,
    R_bar0: float,  # noqa: N803
    t_eval: np.ndarray,
    c_bar0: float = 0.0,
) -> np.ndarray:
    """Well-mixed averages with binding rescaled by ``bcf``, shape (len(t_eval), 3).

    Raises:
        IntegrationFailureError: If the ODE solver fails
    """
    t_eval = np.asarray(t_eval, dtype=float)

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        return STOICHIOMETRY * (bcf * y[0] * y[1] / params.K - y[2])

    solution = solve_ivp(
        rhs,
        (float(t_eval[0]), float(t_eval[-1])),
        np.array([m_bar0, R_bar0, c_bar0]),
        method="LSODA",
        t_eval=t_eval,
        rtol=REDUCED_RTOL,
        atol=REDUCED_ATOL,
    )
    if not solution.success:
        raise IntegrationFailureError(f"Reduced model failed: {solution.message}", time=float(solution.t[-1]))
    return solution.y.T

