"""Slope-of-log-norm classification and bisection on its sign."""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np

from rd_contract.core.errors import DegenerateWindowError, NoBracketError
from rd_contract.core.grid import l2_norm
from rd_contract.core.utils.logging import logger
from rd_contract.types.diffusion import PsiWeight
from rd_contract.types.grid import SpatialGrid
from rd_contract.types.simulation import Stability, Trajectory

from .decompose import decompose
from .integrator import integrate
from .system import RDSystem

SLOPE_ZERO_TOL = 1e-4

NormKind = Literal["state", "deviation"]


def _window_norms(
    traj: Trajectory, mask: np.ndarray, norm: NormKind, psi: PsiWeight | None
) -> np.ndarray:
    if norm == "state":
        return traj.norms[mask]
    if psi is None:
        raise ValueError("The deviation norm needs the no-flux profiles")
    return np.array([l2_norm(decompose(s, psi).z_perp, traj.grid) for s in traj.states[mask]])


def log_norm_slope(
    traj: Trajectory,
    t_lo: float,
    t_hi: float,
    *,
    norm: NormKind = "state",
    psi: PsiWeight | None = None,
) -> float:
    """Least-squares slope of log||z|| (or log||z_perp||) against t over [t_lo, t_hi].

    Raises:
        DegenerateWindowError: If fewer than two samples fall in the window or a norm there is zero
    """
    mask = (traj.times >= t_lo - 1e-12) & (traj.times <= t_hi + 1e-12)
    if int(mask.sum()) < 2:
        raise DegenerateWindowError(f"Window [{t_lo}, {t_hi}] holds {int(mask.sum())} samples, need at least 2")
    values = _window_norms(traj, mask, norm, psi)
    if np.any(values <= 0.0) or not np.all(np.isfinite(values)):
        raise DegenerateWindowError(f"Zero or non-finite {norm} norm inside [{t_lo}, {t_hi}]")
    slope, _ = np.polyfit(traj.times[mask], np.log(values), deg=1)
    return float(slope)


def classify_slope(slope: float) -> Stability:
    if abs(slope) < SLOPE_ZERO_TOL:
        return Stability.NEUTRAL
    return Stability.STABLE if slope < 0 else Stability.UNSTABLE


def critical_parameter(
    slope_at: Callable[[float], float],
    p_lo: float,
    p_hi: float,
    tol: float,
) -> float:
    """Bisect on the sign of the slope until the bracket is narrower than ``tol``.

    A slope within 1e-4 of zero counts as the boundary itself and ends the search.

    Args:
        slope_at: Parameter -> slope, typically a :class:`SlopeProbe`
        p_lo: Lower bracket end
        p_hi: Upper bracket end
        tol: Final bracket width

    Returns:
        Midpoint of the final bracket

    Raises:
        NoBracketError: If both ends have the same slope sign
    """
    if not p_lo < p_hi:
        raise ValueError(f"Need p_lo < p_hi, got [{p_lo}, {p_hi}]")
    s_lo = slope_at(p_lo)
    if abs(s_lo) < SLOPE_ZERO_TOL:
        return p_lo
    s_hi = slope_at(p_hi)
    if abs(s_hi) < SLOPE_ZERO_TOL:
        return p_hi
    if np.sign(s_lo) == np.sign(s_hi):
        raise NoBracketError(f"Slopes at {p_lo} ({s_lo:.3e}) and {p_hi} ({s_hi:.3e}) have the same sign")

    lo, hi = p_lo, p_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s_mid = slope_at(mid)
        if abs(s_mid) < SLOPE_ZERO_TOL:
            logger.info(f"Slope vanishes at {mid:.6g}")
            return mid
        if np.sign(s_mid) == np.sign(s_lo):
            lo = mid
        else:
            hi = mid
        logger.info(f"Bracket [{lo:.6g}, {hi:.6g}] (slope {s_mid:+.3e} at {mid:.6g})")
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SlopeProbe:
    """Parameter -> simulated slope, picklable so sweeps can ship it to worker processes.

    Attributes:
        builder: Parameter -> system; use a module-level function or ``functools.partial``
        initial_state: Grid -> initial state
        t_end: Final time of each run
        window: Slope window
        dt: Step size, None for the default
        sample_every: Sampling stride
        norm: Which norm the slope is taken of
    """

    builder: Callable[[float], RDSystem]
    initial_state: Callable[[SpatialGrid], np.ndarray]
    t_end: float = 100.0
    window: tuple[float, float] = (80.0, 100.0)
    dt: float | None = None
    sample_every: int = 10
    norm: NormKind = "state"

    def __call__(self, parameter: float) -> float:
        system = self.builder(parameter)
        traj = integrate(
            system,
            self.initial_state(system.grid),
            self.t_end,
            dt=self.dt,
            sample_every=self.sample_every,
        )
        slope = log_norm_slope(traj, *self.window, norm=self.norm, psi=system.psi)
        logger.debug(f"slope({parameter:.6g}) = {slope:+.4e}")
        return slope
