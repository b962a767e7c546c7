from .sweep_runner import SweepRunner, omega_sweep_point, zeta_critical_point

__all__ = ["SweepRunner", "omega_sweep_point", "zeta_critical_point"]
