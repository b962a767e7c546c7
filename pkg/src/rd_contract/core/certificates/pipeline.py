"""Certificate pipelines: the full four-condition test, the hierarchical shortcut, and the linear and
nonlinear front ends that build their inputs.
"""

from collections.abc import Callable

import numpy as np

from rd_contract.core.diffusion import assemble_operators, psi_weights
from rd_contract.core.errors import InvalidParameterError, PremiseViolationError
from rd_contract.core.utils.logging import logger
from rd_contract.types.certificate import (
    CertificateInputs,
    CertificateMode,
    CertificateReport,
    ConditionDiagnostics,
    StateBox,
)
from rd_contract.types.config import LambdaSource, SamplingSettings
from rd_contract.types.diffusion import DiffusionSpec, PsiWeight

from . import metrics
from .conditions import (
    coupling_diagnostics,
    coupling_sigma,
    lambda1_diagnostics,
    lambda2_diagnostics,
    small_gain,
)
from .sampling import box_probes

PREMISE_TOL = 1e-9
PREMISE_FIELDS = 4

BoxJacobian = Callable[[np.ndarray, np.ndarray], np.ndarray]
"""(x, p) -> (len(x), s, s) Jacobian of the full kinetics at box point p."""


def _finish(
    inputs: CertificateInputs,
    mode: CertificateMode,
    diagnostics: list[ConditionDiagnostics],
    condition_pass: tuple[bool, bool, bool, bool],
    beta: float,
    lambda_star: float,
    sampling: SamplingSettings,
    **extra: object,
) -> CertificateReport:
    lambda1, lambda2 = diagnostics[0].value, diagnostics[1].value
    report = CertificateReport(
        mode=mode,
        lambda1=lambda1,
        lambda2=lambda2,
        beta=beta,
        sigma=coupling_sigma(beta, inputs.m1_star, inputs.m2_star),
        lambda_star=lambda_star if all(condition_pass) else None,
        m1_star=inputs.m1_star,
        m2_star=inputs.m2_star,
        condition_pass=condition_pass,
        diagnostics=tuple(diagnostics),
        lambda_source=inputs.lambda_source,
        gamma_mode=inputs.gamma_mode,
        sampling=sampling,
        constants={k: float(v) for k, v in inputs.metadata.items() if isinstance(v, int | float)},
        **extra,
    )
    verdict = "certified" if report.certified else "not certified"
    logger.info(
        f"{mode.value}: lambda1={lambda1:.6g} lambda2={lambda2:.6g} beta={beta:.6g} -> {verdict}"
    )
    return report


def certify_inputs(inputs: CertificateInputs, sampling: SamplingSettings | None = None) -> CertificateReport:
    """Evaluate all four conditions and the contraction rate."""
    sampling = sampling or SamplingSettings()
    d1 = lambda1_diagnostics(inputs.m1, inputs.jac_f1, inputs.state_box, sampling)
    d2 = lambda2_diagnostics(
        inputs.gamma, inputs.psi, inputs.jac_f2, inputs.lambda_diag, inputs.state_box, sampling
    )
    d3 = coupling_diagnostics(
        inputs.m1, inputs.gamma, inputs.psi, inputs.jac_g1, inputs.jac_g2, inputs.state_box, sampling
    )
    passed, rate = small_gain(d1.value, d2.value, d3.value, inputs.m1_star, inputs.m2_star)
    d4 = ConditionDiagnostics(name="small_gain", value=d1.value * d2.value, passed=passed)
    return _finish(
        inputs,
        CertificateMode.FULL_THEOREM,
        [d1, d2, d3, d4],
        (d1.passed, d2.passed, d3.passed, passed),
        d3.value,
        rate,
        sampling,
    )


def _zero_mean_fields(psi: PsiWeight, rng: np.random.Generator) -> np.ndarray:
    fields = rng.standard_normal((PREMISE_FIELDS, len(psi.fields), psi.grid.n))
    return fields - (fields @ psi.grid.quad_weights)[:, :, None]


def _spectral_sup(jac: BoxJacobian, x: np.ndarray, probes: np.ndarray) -> float:
    return max(float(np.max(np.linalg.norm(np.atleast_3d(jac(x, p)), ord=2, axis=(1, 2)))) for p in probes)


def _check_premise(
    mode: CertificateMode, inputs: CertificateInputs, probes: np.ndarray, sampling: SamplingSettings
) -> str:
    x = inputs.psi.grid.nodes
    weights = inputs.psi.grid.quad_weights
    a, b = inputs.n_average, inputs.n_deviation
    if mode is CertificateMode.HIERARCHICAL_1:
        fields = _zero_mean_fields(inputs.psi, np.random.default_rng(sampling.seed))
        for probe in probes:
            density = np.broadcast_to(np.asarray(inputs.jac_g1(x, probe), dtype=float), (x.size, a, b))
            scale = max(1.0, float(np.max(np.abs(density))))
            for z_perp in fields:
                g1 = np.einsum("k,kij,jk->i", weights, density, z_perp)
                if float(np.max(np.abs(g1))) > PREMISE_TOL * scale * float(np.max(np.abs(z_perp))):
                    raise PremiseViolationError(
                        f"Averaged subsystem depends on the deviations: |g1| = {float(np.max(np.abs(g1))):.3e}",
                        probe=probe,
                    )
        return "integral of g1 vanishes for zero-mean deviations"

    for probe in probes:
        g2 = np.asarray(inputs.jac_g2(x, probe), dtype=float)
        scale = max(1.0, float(np.max(np.abs(np.asarray(inputs.jac_f2(x, probe), dtype=float)))))
        if float(np.max(np.abs(g2))) > PREMISE_TOL * scale:
            raise PremiseViolationError(
                f"Deviation subsystem depends on the averages: |dg2/dw_bar| = {float(np.max(np.abs(g2))):.3e}",
                probe=probe,
            )
    return "dg2/dw_bar vanishes"


def certify_hierarchical(
    mode: int | CertificateMode,
    inputs: CertificateInputs,
    sampling: SamplingSettings | None = None,
) -> CertificateReport:
    """Check only the two margins when one subsystem does not feed the other.

    Mode 1 requires the averaged subsystem to ignore the deviations (integral of g1 is zero); mode
    2 requires the deviation subsystem to ignore the averages. The premise is verified on every
    probe before the margins are evaluated; the rate is min(lambda1, lambda2).

    Raises:
        PremiseViolationError: If the decoupling premise fails on a probe
    """
    sampling = sampling or SamplingSettings()
    if not isinstance(mode, CertificateMode):
        lookup = {1: CertificateMode.HIERARCHICAL_1, 2: CertificateMode.HIERARCHICAL_2}
        if mode not in lookup:
            raise InvalidParameterError(f"Hierarchical mode must be 1 or 2, got {mode}")
        mode = lookup[mode]
    if mode is CertificateMode.FULL_THEOREM:
        raise InvalidParameterError("certify_hierarchical needs mode 1 or 2")

    probes = box_probes(inputs.state_box, sampling)
    premise = _check_premise(mode, inputs, probes, sampling)
    x = inputs.psi.grid.nodes
    cross = inputs.jac_g2 if mode is CertificateMode.HIERARCHICAL_1 else inputs.jac_g1
    cross_bound = _spectral_sup(cross, x, probes)

    d1 = lambda1_diagnostics(inputs.m1, inputs.jac_f1, inputs.state_box, sampling)
    d2 = lambda2_diagnostics(
        inputs.gamma, inputs.psi, inputs.jac_f2, inputs.lambda_diag, inputs.state_box, sampling
    )
    skipped = "not required: one-way coupling"
    d3 = ConditionDiagnostics(name="beta", value=0.0, passed=True, note=skipped)
    d4 = ConditionDiagnostics(name="small_gain", value=d1.value * d2.value, passed=True, note=skipped)
    return _finish(
        inputs,
        mode,
        [d1, d2, d3, d4],
        (d1.passed, d2.passed, True, True),
        0.0,
        min(d1.value, d2.value),
        sampling,
        premise=premise,
        cross_jacobian_bound=cross_bound,
    )


def diffusion_margins(spec: DiffusionSpec, source: LambdaSource) -> np.ndarray:
    """Lambda per species: the analytic floor or the numeric second eigenvalue."""
    operators = assemble_operators(spec)
    if source is LambdaSource.NUMERIC:
        return np.array([op.lambda_numeric for op in operators])
    return np.array([op.lambda_bound for op in operators])


def linear_inputs(
    a_at: BoxJacobian,
    spec: DiffusionSpec,
    m1: np.ndarray,
    gamma: np.ndarray | None,
    state_box: StateBox,
    *,
    lambda_source: LambdaSource = LambdaSource.FLOOR,
    pointwise_gamma: bool = False,
) -> CertificateInputs:
    """Inputs for dz/dt = L z + A(x, p) z with A sampled over the box.

    With z = Psi w_bar + z_perp the averaged block is A_bar_Psi = integral(A Psi), the deviation
    block is A itself, g1 has density A and dg2/dw_bar = A Psi - Psi A_bar_Psi.

    Args:
        a_at: (x, p) -> A at every node
        spec: Diffusion of every species
        m1: Averaged-subsystem metric
        gamma: Diagonal of Gamma; ignored when ``pointwise_gamma`` is set
        state_box: Box of the extra arguments p (time, or the state for linearizations)
        lambda_source: Where the diffusion margins come from
        pointwise_gamma: Use per-node diagonal witnesses, two species only
    """
    psi = psi_weights(spec)
    grid = spec.grid
    x = grid.nodes
    s = spec.n_species
    psi_nodes = psi.matrix.T
    weights = grid.quad_weights
    lambda_diag = diffusion_margins(spec, lambda_source)

    def a_nodes(p: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(a_at(x, p), dtype=float), (x.size, s, s))

    def a_bar_psi(p: np.ndarray) -> np.ndarray:
        return np.einsum("k,kij,kj->ij", weights, a_nodes(p), psi_nodes)

    def jac_f2(_x: np.ndarray, p: np.ndarray) -> np.ndarray:
        return a_nodes(p)

    def jac_g2(_x: np.ndarray, p: np.ndarray) -> np.ndarray:
        a = a_nodes(p)
        return a * psi_nodes[:, None, :] - psi_nodes[:, :, None] * a_bar_psi(p)[None, :, :]

    if pointwise_gamma:
        if s != 2:
            raise InvalidParameterError("Pointwise diagonal witnesses are implemented for two species")
        centre = 0.5 * (state_box.lower + state_box.upper)
        blocks = (a_nodes(centre) - np.diag(lambda_diag)) / psi_nodes[:, :, None]
        gamma_values = metrics.pointwise_gamma(blocks)
    else:
        gamma_values = np.ones(s) if gamma is None else np.asarray(gamma, dtype=float)

    return CertificateInputs(
        m1=m1,
        gamma=gamma_values,
        psi=psi,
        lambda_diag=lambda_diag,
        state_box=state_box,
        jac_f1=a_bar_psi,
        jac_f2=jac_f2,
        jac_g1=jac_f2,
        jac_g2=jac_g2,
        lambda_source=lambda_source,
    )


def certify_linear_system(  # noqa: PLR0913
    a_sampler: Callable[[float, np.ndarray], np.ndarray],
    spec: DiffusionSpec,
    m1: np.ndarray,
    gamma: np.ndarray | None = None,
    *,
    time_box: tuple[float, float] | None = None,
    lambda_source: LambdaSource = LambdaSource.FLOOR,
    sampling: SamplingSettings | None = None,
    pointwise_gamma: bool = False,
    mode: CertificateMode = CertificateMode.FULL_THEOREM,
) -> CertificateReport:
    """Certificate of dz/dt = L z + A(t, x) z, full theorem or one of the hierarchical shortcuts.

    Args:
        a_sampler: (t, x) -> A, shape (len(x), s, s) or (s, s)
        spec: Diffusion of every species
        m1: Averaged-subsystem metric
        gamma: Diagonal of Gamma, identity when None
        time_box: Time interval sampled for time-varying A; None evaluates at t = 0
        lambda_source: Where the diffusion margins come from
        sampling: Probe density
        pointwise_gamma: Use per-node diagonal witnesses
        mode: Which conditions to check
    """
    box = StateBox.empty() if time_box is None else StateBox.from_bounds({"t": time_box})

    def a_at(x: np.ndarray, p: np.ndarray) -> np.ndarray:
        return a_sampler(float(p[0]) if p.size else 0.0, x)

    inputs = linear_inputs(a_at, spec, m1, gamma, box, lambda_source=lambda_source, pointwise_gamma=pointwise_gamma)
    if mode is CertificateMode.FULL_THEOREM:
        return certify_inputs(inputs, sampling)
    return certify_hierarchical(mode, inputs, sampling)


def certify_nonlinear(  # noqa: PLR0913
    f_sampler: Callable[[float, np.ndarray, np.ndarray], np.ndarray],
    jacobian_sampler: Callable[[float, np.ndarray, np.ndarray], np.ndarray],
    spec: DiffusionSpec,
    m1: np.ndarray,
    gamma: np.ndarray | None,
    state_box: StateBox,
    *,
    lambda_source: LambdaSource = LambdaSource.FLOOR,
    sampling: SamplingSettings | None = None,
) -> CertificateReport:
    """Certificate of dz/dt = L z + f(x, z) through the linear pipeline with A = df/dz.

    The box holds one interval per species; each probe is a spatially uniform state.

    Raises:
        PremiseViolationError: If f(0, x, 0) is not zero
    """
    grid = spec.grid
    x = grid.nodes
    s = spec.n_species
    if state_box.dim != s:
        raise InvalidParameterError(f"State box has {state_box.dim} dimensions for {s} species")

    at_zero = np.asarray(f_sampler(0.0, x, np.zeros((s, grid.n))), dtype=float)
    residual = float(np.max(np.abs(at_zero)))
    if residual > PREMISE_TOL:
        idx = int(np.argmax(np.max(np.abs(at_zero), axis=0)))
        raise PremiseViolationError(f"f(t, x, 0) = {residual:.3e} at x={x[idx]:.6g}", probe=(0.0, float(x[idx])))

    def a_at(nodes: np.ndarray, p: np.ndarray) -> np.ndarray:
        return jacobian_sampler(0.0, nodes, np.repeat(p[:, None], nodes.size, axis=1))

    inputs = linear_inputs(a_at, spec, m1, gamma, state_box, lambda_source=lambda_source)
    return certify_inputs(inputs, sampling)
