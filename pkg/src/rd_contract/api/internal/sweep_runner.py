"""Worker pool for parameter sweeps.

Each sweep point is an independent simulation, so points go to separate processes. Tasks are
module-level functions bound with ``functools.partial`` so that they pickle.
"""

from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from functools import partial
from typing import TypeVar

from rd_contract.core.grid import make_uniform_grid
from rd_contract.core.models import (
    build_example_3_1,
    build_example_3_2,
    nu_of_r,
    ramp_initial_state,
    scalar_certificate,
    uniform_initial_state,
    zeta_upper_bound,
)
from rd_contract.core.simulation import SlopeProbe, classify_slope, critical_parameter
from rd_contract.core.utils import logger
from rd_contract.types.config import TimeSettings
from rd_contract.types.simulation import CriticalPoint, SweepPoint

T = TypeVar("T")


class SweepRunner:
    """Evaluate a task at many parameter values and return the results in parameter order.

    Example:
        >>> runner = SweepRunner(workers=4)
        >>> points = runner.run(partial(omega_sweep_point, epsilon=1e-2, n=500, time=TimeSettings()), [0.01, 0.1])
    """

    def __init__(self, workers: int = 1) -> None:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers

    def run(self, task: Callable[[float], T], parameters: Sequence[float]) -> list[T]:
        """Run ``task`` at every parameter.

        With one worker, or a single parameter, everything runs in this process.

        Args:
            task: Picklable callable of one float
            parameters: Values to evaluate

        Returns:
            Results sorted by parameter, independent of completion order
        """
        values = sorted(float(p) for p in parameters)
        if not values:
            return []
        total = len(values)

        if self.workers == 1 or total == 1:
            results = []
            for i, value in enumerate(values, start=1):
                results.append(task(value))
                logger.info(f"[{i}/{total}] parameter={value:.6g} done")
            return results

        by_parameter: dict[float, T] = {}
        with ProcessPoolExecutor(max_workers=min(self.workers, total)) as pool:
            future_to_parameter = {pool.submit(task, value): value for value in values}
            for done, future in enumerate(as_completed(future_to_parameter), start=1):
                value = future_to_parameter[future]
                by_parameter[value] = future.result()
                logger.info(f"[{done}/{total}] parameter={value:.6g} done")
        return [by_parameter[value] for value in values]


def omega_sweep_point(omega: float, *, epsilon: float, n: int, time: TimeSettings) -> SweepPoint:
    """Slope of log||z|| for the scalar system at one omega, with the scalar certificate verdict."""
    grid = make_uniform_grid(n)
    probe = SlopeProbe(
        builder=partial(build_example_3_1, epsilon, grid=grid),
        initial_state=uniform_initial_state,
        t_end=time.t_end,
        window=time.window,
        dt=time.dt,
        sample_every=time.sample_every,
    )
    slope = probe(omega)
    certified = scalar_certificate(epsilon, omega, grid).certified
    return SweepPoint(parameter=omega, slope=slope, classification=classify_slope(slope), certified=certified)


def zeta_critical_point(
    r: float, *, n: int, zeta_min: float, zeta_max: float, tol: float, time: TimeSettings
) -> CriticalPoint:
    """Bisected zeta_cr for the two-species system at one r, next to the bound 2/nu(r).

    The slope is taken of the deviation norm ||z_perp||, since the averages decay at the rate of A
    whatever zeta is.
    """
    grid = make_uniform_grid(n)
    probe = SlopeProbe(
        builder=partial(build_example_3_2, r=r, grid=grid),
        initial_state=ramp_initial_state,
        t_end=time.t_end,
        window=time.window,
        dt=time.dt,
        sample_every=time.sample_every,
        norm="deviation",
    )
    critical = critical_parameter(probe, zeta_min, zeta_max, tol * zeta_min)
    return CriticalPoint(r=r, nu=nu_of_r(r, grid), critical=critical, bound=zeta_upper_bound(r, grid))
