from .theta_diffusion import (
    LAMBDA_STAR,
    EigenResult,
    OperatorAssembly,
    apply_flux,
    assemble_operator,
    assemble_operators,
    eigenvalue_lower_bound,
    psi_weight,
    psi_weights,
    second_eigenvalue_numeric,
    weighted_inner,
)

__all__ = [
    "LAMBDA_STAR",
    "EigenResult",
    "OperatorAssembly",
    "apply_flux",
    "assemble_operator",
    "assemble_operators",
    "eigenvalue_lower_bound",
    "psi_weight",
    "psi_weights",
    "second_eigenvalue_numeric",
    "weighted_inner",
]
