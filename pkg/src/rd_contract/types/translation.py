"""Parameters and derived bounds of the spatial translation model.

Species order throughout is (mRNA m, ribosome R, complex c). Time is normalized by the complex
turnover rate, so diffusivities enter as the dimensionless chi's.
"""

import math
from dataclasses import dataclass
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .grid import ScalarField, SpatialGrid, VolumeProfile


class TranslationParams(BaseModel):
    """Constants of the translation model.

    The complex radius is not free: the complex profile is the product of the mRNA and ribosome
    profiles, which for the exponential profile family fixes r_c = sqrt(r_m^2 + r_r^2).
    """

    model_config = ConfigDict(frozen=True)

    K: float = 1.0
    """Dissociation constant (d + kappa) / a, in concentration units."""

    chi_m: float = 1.0
    """Normalized mRNA diffusivity."""

    chi_r: float = 10.0
    """Normalized ribosome diffusivity."""

    chi_c: float = 1.0
    """Normalized complex diffusivity."""

    r_m: float = 0.4
    """mRNA radius of gyration."""

    r_r: float = 0.2
    """Ribosome radius of gyration."""

    x_star: float = 0.5
    """Nucleoid centre."""

    c_star: float = 4.0
    """Size of the invariant set."""

    mrna_total: float = 1.0
    """Conserved total m_bar + c_bar."""

    ribosome_total: float = 1.0
    """Conserved total R_bar + c_bar."""

    @model_validator(mode="after")
    def _check_ranges(self) -> Self:
        positive = {"K": self.K, "chi_m": self.chi_m, "chi_r": self.chi_r, "chi_c": self.chi_c, "c_star": self.c_star}
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        for name, value in {"r_m": self.r_m, "r_r": self.r_r}.items():
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        for name, value in {"mrna_total": self.mrna_total, "ribosome_total": self.ribosome_total}.items():
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
        if not 0.0 < self.x_star < 1.0:
            raise ValueError(f"x_star must lie in (0, 1), got {self.x_star}")
        return self

    @property
    def r_c(self) -> float:
        return math.hypot(self.r_m, self.r_r)

    @property
    def chis(self) -> tuple[float, float, float]:
        return (self.chi_m, self.chi_r, self.chi_c)

    @property
    def radii(self) -> tuple[float, float, float]:
        return (self.r_m, self.r_r, self.r_c)

    def scaled(self, factor: float) -> "TranslationParams":
        """Copy with every diffusivity multiplied by ``factor``."""
        return self.model_copy(
            update={"chi_m": self.chi_m * factor, "chi_r": self.chi_r * factor, "chi_c": self.chi_c * factor}
        )


class TranslationBounds(BaseModel):
    """Invariant-set bounds and the certificate constants built from them.

    Extrema tuples are ordered (m, R, c).
    """

    model_config = ConfigDict(frozen=True)

    mrna_star: float
    ribosome_star: float
    mrna_perp_star: float
    ribosome_perp_star: float
    eta_max: float
    beta_u: float
    beta_u_eta: float
    beta_h: float
    bcf: float
    v_sup: tuple[float, float, float]
    v_inf: tuple[float, float, float]
    v_hat_sup: tuple[float, float, float]
    v_hat_inf: tuple[float, float, float]

    @property
    def psi_ratio(self) -> float:
        """Psi^* / Psi_*, the largest over smallest normalized profile value across species."""
        return max(self.v_hat_sup) / min(self.v_hat_inf)


@dataclass(frozen=True, eq=False)
class QssState:
    """Errors relative to the quasi-steady-state manifold.

    Attributes:
        e_bar: c_bar - bcf * m_bar * R_bar / K
        m_perp: m - v_hat_m * m_bar
        R_perp: R - v_hat_r * R_bar
        c_perp: c - v_hat_c * c_bar
    """

    e_bar: float
    m_perp: ScalarField
    R_perp: ScalarField
    c_perp: ScalarField


@dataclass(frozen=True, eq=False)
class TranslationProfiles:
    """Available-volume profiles of the three species and their normalized forms.

    Attributes:
        volumes: v_m, v_r, v_c
        normalized: v_hat_m, v_hat_r, v_hat_c, each integrating to 1
        bcf: Binding correction factor integral(v_m v_r) / (integral(v_m) integral(v_r))
    """

    volumes: tuple[VolumeProfile, VolumeProfile, VolumeProfile]
    normalized: tuple[ScalarField, ScalarField, ScalarField]
    bcf: float

    @property
    def grid(self) -> SpatialGrid:
        return self.volumes[0].grid

    def volume_matrix(self) -> np.ndarray:
        """(3, n) stack of v_m, v_r, v_c."""
        return np.vstack([p.v.values for p in self.volumes])

    def normalized_matrix(self) -> np.ndarray:
        """(3, n) stack of the normalized profiles."""
        return np.vstack([p.values for p in self.normalized])
