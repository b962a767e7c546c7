import numpy as np

from rd_contract.core.errors import InvalidMetricError
from rd_contract.core.grid import integrate_values
from rd_contract.types.diffusion import PsiWeight
from rd_contract.types.simulation import ContractionDiagnostics

from .decompose import decompose
from .integrator import default_time_step, integrate
from .system import RDSystem


def contraction_decay_check(  # noqa: PLR0913
    system: RDSystem,
    z0_a: np.ndarray,
    z0_b: np.ndarray,
    m1: np.ndarray,
    gamma: np.ndarray,
    psi: PsiWeight,
    t_end: float,
    dt: float | None = None,
    sample_every: int = 1,
) -> ContractionDiagnostics:
    """Integrate two runs and track their distance in the block metric diag(M1, Gamma Psi^-1).

    Args:
        system: System both runs share
        z0_a: First initial state
        z0_b: Second initial state
        m1: Averaged-subsystem metric, positive definite
        gamma: Positive diagonal of Gamma
        psi: No-flux profiles defining the decomposition and M2
        t_end: Final time
        dt: Step size; both runs use the same one
        sample_every: Sampling stride

    Returns:
        v1, v2 at every common sample time

    Raises:
        InvalidMetricError: If M1 is not positive definite or Gamma is not positive
        IntegrationFailureError: Propagated from either run
    """
    m1 = np.atleast_2d(np.asarray(m1, dtype=float))
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    if float(np.linalg.eigvalsh(0.5 * (m1 + m1.T))[0]) <= 0.0:
        raise InvalidMetricError("M1 must be positive definite")
    if np.any(gamma <= 0.0):
        raise InvalidMetricError("Gamma must have positive diagonal entries")

    if dt is None:
        # a shared step keeps the sample times aligned
        dt = min(default_time_step(system, np.atleast_2d(z0_a)), default_time_step(system, np.atleast_2d(z0_b)))

    traj_a = integrate(system, z0_a, t_end, dt=dt, sample_every=sample_every)
    traj_b = integrate(system, z0_b, t_end, dt=dt, sample_every=sample_every)

    v1 = np.empty(traj_a.times.size)
    v2 = np.empty(traj_a.times.size)
    weight = gamma[:, None] / psi.matrix
    for k, (state_a, state_b) in enumerate(zip(traj_a.states, traj_b.states, strict=True)):
        parts_a = decompose(state_a, psi)
        parts_b = decompose(state_b, psi)
        e_bar = parts_a.w_bar - parts_b.w_bar
        e_perp = parts_a.z_perp - parts_b.z_perp
        v1[k] = float(e_bar @ m1 @ e_bar)
        v2[k] = float(np.sum(integrate_values(weight * e_perp**2, psi.grid)))
    return ContractionDiagnostics(times=traj_a.times, v1=v1, v2=v2)
