"""The four contraction conditions, evaluated by sampling.

Margins are returned as signed reals: a positive lambda means the condition holds with that rate.
Each ``*_diagnostics`` function also reports where the condition is tightest.
"""

import math

import numpy as np
from scipy import linalg

from rd_contract.core.errors import InvalidMetricError
from rd_contract.types.certificate import AveragedJacobian, ConditionDiagnostics, NodalJacobian, StateBox
from rd_contract.types.config import SamplingSettings
from rd_contract.types.diffusion import PsiWeight

from .sampling import box_probes

SMALL_GAIN_SLACK = 1e-12


def _probe_tuple(probe: np.ndarray) -> tuple[float, ...]:
    return tuple(float(v) for v in probe)


def _check_m1(m1: np.ndarray) -> np.ndarray:
    m1 = np.atleast_2d(np.asarray(m1, dtype=float))
    if m1.shape[0] != m1.shape[1] or not np.allclose(m1, m1.T, rtol=1e-12, atol=1e-14):
        raise InvalidMetricError("M1 must be a symmetric square matrix")
    if float(np.linalg.eigvalsh(m1)[0]) <= 0.0:
        raise InvalidMetricError("M1 is not positive definite")
    return m1


def _m2_at_nodes(gamma: np.ndarray, psi: PsiWeight) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma <= 0.0) or not np.all(np.isfinite(gamma)):
        raise InvalidMetricError("Gamma diagonal entries must be positive")
    n_species = len(psi.fields)
    return np.broadcast_to(gamma, (psi.grid.n, n_species)) / psi.matrix.T


def _nodal(jac: NodalJacobian, x: np.ndarray, probe: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.broadcast_to(np.asarray(jac(x, probe), dtype=float), (x.size, rows, cols))


def lambda1_diagnostics(
    m1: np.ndarray,
    jac_f1: AveragedJacobian,
    state_box: StateBox,
    sampling: SamplingSettings | None = None,
) -> ConditionDiagnostics:
    """Averaged-subsystem margin with the probe that attains it."""
    m1 = _check_m1(m1)
    worst_value = math.inf
    worst_probe = None
    for probe in box_probes(state_box, sampling):
        jac = np.atleast_2d(np.asarray(jac_f1(probe), dtype=float))
        sym = 0.5 * (m1 @ jac + jac.T @ m1)
        top = float(linalg.eigh(sym, m1, eigvals_only=True)[-1])
        if -top < worst_value:
            worst_value, worst_probe = -top, probe
    return ConditionDiagnostics(
        name="lambda1",
        value=worst_value,
        passed=worst_value > 0.0,
        worst_probe=_probe_tuple(worst_probe) if worst_probe is not None else None,
    )


def lambda1_margin(
    m1: np.ndarray,
    jac_f1: AveragedJacobian,
    state_box: StateBox,
    sampling: SamplingSettings | None = None,
) -> float:
    """lambda1 = inf over the box of -(largest generalized eigenvalue of sym(M1 J) w.r.t. M1).

    Raises:
        InvalidMetricError: If M1 is not symmetric positive definite
    """
    return lambda1_diagnostics(m1, jac_f1, state_box, sampling).value


def lambda2_diagnostics(
    gamma: np.ndarray,
    psi: PsiWeight,
    jac_f2: NodalJacobian,
    lambda_diag: np.ndarray,
    state_box: StateBox,
    sampling: SamplingSettings | None = None,
) -> ConditionDiagnostics:
    """Deviation-subsystem margin with the node and probe that attain it."""
    m2 = _m2_at_nodes(gamma, psi)
    x = psi.grid.nodes
    b = m2.shape[1]
    shift = np.diag(np.atleast_1d(np.asarray(lambda_diag, dtype=float)))
    scale = 1.0 / np.sqrt(m2[:, :, None] * m2[:, None, :])

    worst_value = math.inf
    worst_probe: np.ndarray | None = None
    worst_x = None
    for probe in box_probes(state_box, sampling):
        k = _nodal(jac_f2, x, probe, b, b) - shift
        weighted = m2[:, :, None] * k
        sym = 0.5 * (weighted + np.transpose(weighted, (0, 2, 1)))
        top = np.linalg.eigvalsh(sym * scale)[:, -1]
        idx = int(np.argmax(top))
        if -top[idx] < worst_value:
            worst_value, worst_probe, worst_x = float(-top[idx]), probe, float(x[idx])
    return ConditionDiagnostics(
        name="lambda2",
        value=worst_value,
        passed=worst_value > 0.0,
        worst_x=worst_x,
        worst_probe=_probe_tuple(worst_probe) if worst_probe is not None else None,
    )


def lambda2_margin(
    gamma: np.ndarray,
    psi: PsiWeight,
    jac_f2: NodalJacobian,
    lambda_diag: np.ndarray,
    state_box: StateBox,
    sampling: SamplingSettings | None = None,
) -> float:
    """lambda2 = inf over nodes and the box of -(largest eigenvalue of sym(M2 (J - Lambda)) w.r.t. M2).

    M2 = Gamma Psi^-1(x) is diagonal at every node, so the generalized problem is solved as an
    ordinary symmetric one after the scaling M2^-1/2 (.) M2^-1/2.

    Raises:
        InvalidMetricError: If Gamma has a nonpositive entry
    """
    return lambda2_diagnostics(gamma, psi, jac_f2, lambda_diag, state_box, sampling).value


def coupling_diagnostics(
    m1: np.ndarray,
    gamma: np.ndarray,
    psi: PsiWeight,
    jac_g1: NodalJacobian,
    jac_g2: NodalJacobian,
    state_box: StateBox,
    sampling: SamplingSettings | None = None,
) -> ConditionDiagnostics:
    """Coupling bound beta with the node where the pointwise supremum is largest."""
    m1 = _check_m1(m1)
    m2 = _m2_at_nodes(gamma, psi)
    x = psi.grid.nodes
    weights = psi.grid.quad_weights
    a = m1.shape[0]
    b = m2.shape[1]

    sup = np.zeros(x.size)
    sup_probe: list[np.ndarray | None] = [None] * x.size
    for probe in box_probes(state_box, sampling):
        g1 = _nodal(jac_g1, x, probe, a, b)
        g2 = _nodal(jac_g2, x, probe, b, a)
        coupling = np.transpose(g1, (0, 2, 1)) @ m1 + m2[:, :, None] * g2
        perp = coupling - np.einsum("k,kij->ij", weights, coupling)
        top = np.linalg.eigvalsh(np.transpose(perp, (0, 2, 1)) @ perp)[:, -1]
        better = top > sup
        sup = np.where(better, top, sup)
        for idx in np.flatnonzero(better):
            sup_probe[idx] = probe

    beta = math.sqrt(max(float(weights @ sup), 0.0))
    idx = int(np.argmax(sup))
    probe = sup_probe[idx]
    return ConditionDiagnostics(
        name="beta",
        value=beta,
        passed=math.isfinite(beta),
        worst_x=float(x[idx]),
        worst_probe=_probe_tuple(probe) if probe is not None else None,
    )


def coupling_beta(
    m1: np.ndarray,
    gamma: np.ndarray,
    psi: PsiWeight,
    jac_g1: NodalJacobian,
    jac_g2: NodalJacobian,
    state_box: StateBox,
    sampling: SamplingSettings | None = None,
) -> float:
    """beta = sqrt(integral of sup over the box of lambda_max(G_perp^T G_perp)).

    G = (dg1/dz_perp)^T M1 + M2 dg2/dw_bar at every node and G_perp = G - integral(G) for the same
    probe.
    """
    return coupling_diagnostics(m1, gamma, psi, jac_g1, jac_g2, state_box, sampling).value


def coupling_sigma(beta: float, m1_star: float, m2_star: float) -> float:
    """sigma = beta / (2 sqrt(m1_* m2_*))."""
    return beta / (2.0 * math.sqrt(m1_star * m2_star))


def contraction_rate(lambda1: float, lambda2: float, sigma: float) -> float:
    """(l1 + l2)/2 - sqrt(((l1 - l2)/2)^2 + sigma^2), never above min(l1, l2)."""
    return 0.5 * (lambda1 + lambda2) - math.hypot(0.5 * (lambda1 - lambda2), sigma)


def small_gain(
    lambda1: float,
    lambda2: float,
    beta: float,
    m1_star: float,
    m2_star: float,
) -> tuple[bool, float]:
    """Small-gain test lambda1 lambda2 > sigma^2 with both margins positive.

    The inequality is strict with 1e-12 absolute slack.

    Returns:
        (passed, lambda_star); lambda_star is returned either way so callers can plot it
    """
    sigma = coupling_sigma(beta, m1_star, m2_star)
    passed = lambda1 > 0.0 and lambda2 > 0.0 and lambda1 * lambda2 > sigma**2 + SMALL_GAIN_SLACK
    return passed, contraction_rate(lambda1, lambda2, sigma)
