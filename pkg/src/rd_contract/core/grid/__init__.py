from .quadrature import (
    available_volume,
    integrate,
    integrate_values,
    l2_norm,
    make_uniform_grid,
    normalize_profile,
    nucleoid_density,
)

__all__ = [
    "available_volume",
    "integrate",
    "integrate_values",
    "l2_norm",
    "make_uniform_grid",
    "normalize_profile",
    "nucleoid_density",
]
