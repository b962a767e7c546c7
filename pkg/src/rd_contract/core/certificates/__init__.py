from .conditions import (
    SMALL_GAIN_SLACK,
    contraction_rate,
    coupling_beta,
    coupling_diagnostics,
    coupling_sigma,
    lambda1_diagnostics,
    lambda1_margin,
    lambda2_diagnostics,
    lambda2_margin,
    small_gain,
)
from .metrics import diagonal_stability_2x2, diagonal_witness, lyapunov_metric, pointwise_gamma
from .pipeline import (
    certify_hierarchical,
    certify_inputs,
    certify_linear_system,
    certify_nonlinear,
    diffusion_margins,
    linear_inputs,
)
from .sampling import box_probes
from .scalar import (
    certified_boundary,
    certify_scalar_fickian,
    certify_scalar_small_omega,
    small_omega_threshold,
)

__all__ = [
    "SMALL_GAIN_SLACK",
    "box_probes",
    "certified_boundary",
    "certify_hierarchical",
    "certify_inputs",
    "certify_linear_system",
    "certify_nonlinear",
    "certify_scalar_fickian",
    "certify_scalar_small_omega",
    "contraction_rate",
    "coupling_beta",
    "coupling_diagnostics",
    "coupling_sigma",
    "diagonal_stability_2x2",
    "diagonal_witness",
    "diffusion_margins",
    "lambda1_diagnostics",
    "lambda1_margin",
    "lambda2_diagnostics",
    "lambda2_margin",
    "linear_inputs",
    "lyapunov_metric",
    "pointwise_gamma",
    "small_gain",
    "small_omega_threshold",
]
