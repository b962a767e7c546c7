from .linear import (
    TWO_SPECIES_MATRIX,
    build_example_3_1,
    build_example_3_2,
    is_hurwitz,
    linear_reaction,
    nu_of_r,
    ramp_initial_state,
    scalar_certificate,
    scalar_rate,
    two_species_diffusion,
    two_species_eigenvalues,
    two_species_margins,
    uniform_initial_state,
    zeta_upper_bound,
)
from .translation import (
    SPECIES,
    STOICHIOMETRY,
    build_translation_model,
    compute_bcf,
    invariant_set_bounds,
    invariant_set_violation,
    qss_errors,
    reduced_qss_trajectory,
    translation_certificate,
    translation_diffusion,
    translation_initial_state,
    translation_profiles,
    translation_reaction,
    translation_scale_threshold,
    translation_virtual_inputs,
)

__all__ = [
    "SPECIES",
    "STOICHIOMETRY",
    "TWO_SPECIES_MATRIX",
    "build_example_3_1",
    "build_example_3_2",
    "build_translation_model",
    "compute_bcf",
    "invariant_set_bounds",
    "invariant_set_violation",
    "is_hurwitz",
    "linear_reaction",
    "nu_of_r",
    "qss_errors",
    "ramp_initial_state",
    "reduced_qss_trajectory",
    "scalar_certificate",
    "scalar_rate",
    "translation_certificate",
    "translation_diffusion",
    "translation_initial_state",
    "translation_profiles",
    "translation_reaction",
    "translation_scale_threshold",
    "translation_virtual_inputs",
    "two_species_diffusion",
    "two_species_eigenvalues",
    "two_species_margins",
    "uniform_initial_state",
    "zeta_upper_bound",
]
