from .contraction import contraction_decay_check
from .decompose import decompose, deviation_norm, recompose
from .integrator import default_time_step, integrate, reaction_spectral_radius
from .stability import SLOPE_ZERO_TOL, SlopeProbe, classify_slope, critical_parameter, log_norm_slope
from .system import RDSystem, build_system

__all__ = [
    "SLOPE_ZERO_TOL",
    "RDSystem",
    "SlopeProbe",
    "build_system",
    "classify_slope",
    "contraction_decay_check",
    "critical_parameter",
    "decompose",
    "default_time_step",
    "deviation_norm",
    "integrate",
    "log_norm_slope",
    "reaction_spectral_radius",
    "recompose",
]
