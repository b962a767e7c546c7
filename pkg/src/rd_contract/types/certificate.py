"""Certificate inputs and reports.

``CertificateInputs`` carries arrays and Jacobian samplers, so it is a frozen dataclass; the reports
are pydantic models so they serialize straight to JSON.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, computed_field, model_validator

from rd_contract.core.errors import InvalidMetricError, InvalidParameterError

from .config import LambdaSource, SamplingSettings
from .diffusion import PsiWeight

AveragedJacobian = Callable[[np.ndarray], np.ndarray]
"""p -> (a, a) Jacobian of the averaged subsystem at box point p."""

NodalJacobian = Callable[[np.ndarray, np.ndarray], np.ndarray]
"""(x, p) -> (len(x), rows, cols) Jacobian densities at nodes x and box point p."""


class CertificateMode(StrEnum):
    """Which set of contraction conditions a report covers."""

    FULL_THEOREM = "full-theorem"
    HIERARCHICAL_1 = "hierarchical-1"
    """Average subsystem does not see the deviations; only the two margins are checked."""

    HIERARCHICAL_2 = "hierarchical-2"
    """Deviation subsystem does not see the averages; only the two margins are checked."""


class GammaMode(StrEnum):
    CONSTANT = "constant"
    POINTWISE = "pointwise"


@dataclass(frozen=True, eq=False)
class StateBox:
    """Axis-aligned box of admissible virtual-system arguments.

    A zero-dimensional box stands for "no state dependence": it yields exactly one empty probe.
    """

    lower: np.ndarray
    upper: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.shape != upper.shape or lower.ndim != 1:
            raise InvalidParameterError(f"Box bounds have shapes {lower.shape} and {upper.shape}")
        if np.any(lower > upper):
            raise InvalidParameterError(f"Empty state box: lower {lower.tolist()} exceeds upper {upper.tolist()}")
        if self.names and len(self.names) != lower.size:
            raise InvalidParameterError(f"{len(self.names)} names for a {lower.size}-dimensional box")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def empty(cls) -> "StateBox":
        return cls(lower=np.zeros(0), upper=np.zeros(0))

    @classmethod
    def from_bounds(cls, bounds: dict[str, tuple[float, float]]) -> "StateBox":
        names = tuple(bounds)
        return cls(
            lower=np.array([bounds[k][0] for k in names]),
            upper=np.array([bounds[k][1] for k in names]),
            names=names,
        )

    @property
    def dim(self) -> int:
        return int(self.lower.size)

    def contains(self, other: "StateBox") -> bool:
        return bool(np.all(self.lower <= other.lower) and np.all(other.upper <= self.upper))


@dataclass(frozen=True, eq=False)
class CertificateInputs:
    """Everything the four-condition pipeline evaluates.

    Attributes:
        m1: Metric of the averaged subsystem, (a, a) symmetric positive definite
        gamma: Diagonal of Gamma, shape (b,) or per node (n, b); M2(x) = Gamma Psi^-1(x)
        psi: No-flux profiles of the b diffusing species
        lambda_diag: Diffusion margins Lambda, shape (b,)
        state_box: Box over which the samplers are probed
        jac_f1: d f1 / d w_bar
        jac_f2: d f2 / d z_perp, pointwise
        jac_g1: density of d g1 / d z_perp, so that g1 = integral of jac_g1(x) z_perp(x) dx
        jac_g2: d g2 / d w_bar, pointwise
    """

    m1: np.ndarray
    gamma: np.ndarray
    psi: PsiWeight
    lambda_diag: np.ndarray
    state_box: StateBox
    jac_f1: AveragedJacobian
    jac_f2: NodalJacobian
    jac_g1: NodalJacobian
    jac_g2: NodalJacobian
    lambda_source: LambdaSource = LambdaSource.FLOOR
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        m1 = np.atleast_2d(np.asarray(self.m1, dtype=float))
        gamma = np.asarray(self.gamma, dtype=float)
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "lambda_diag", np.atleast_1d(np.asarray(self.lambda_diag, dtype=float)))

        if m1.shape[0] != m1.shape[1] or not np.allclose(m1, m1.T, rtol=1e-12, atol=1e-14):
            raise InvalidMetricError("M1 must be a symmetric square matrix")
        if float(np.linalg.eigvalsh(m1)[0]) <= 0.0:
            raise InvalidMetricError(f"M1 is not positive definite (eigenvalues {np.linalg.eigvalsh(m1).tolist()})")
        b = len(self.psi.fields)
        if gamma.shape not in {(b,), (self.psi.grid.n, b)}:
            raise InvalidMetricError(f"Gamma must be a diagonal of length {b}, got shape {gamma.shape}")
        if np.any(gamma <= 0.0) or not np.all(np.isfinite(gamma)):
            raise InvalidMetricError("Gamma diagonal entries must be positive")
        if self.lambda_diag.shape != (b,):
            raise InvalidParameterError(f"Lambda must have {b} entries, got {self.lambda_diag.shape}")

    @property
    def n_average(self) -> int:
        return int(self.m1.shape[0])

    @property
    def n_deviation(self) -> int:
        return len(self.psi.fields)

    @property
    def gamma_mode(self) -> GammaMode:
        return GammaMode.POINTWISE if self.gamma.ndim == 2 else GammaMode.CONSTANT

    def gamma_at_nodes(self) -> np.ndarray:
        """Gamma broadcast to (n, b)."""
        return np.broadcast_to(self.gamma, (self.psi.grid.n, self.n_deviation))

    def m2_at_nodes(self) -> np.ndarray:
        """Diagonal of M2 = Gamma Psi^-1 at every node, shape (n, b)."""
        return self.gamma_at_nodes() / self.psi.matrix.T

    @property
    def m1_star(self) -> float:
        return float(np.linalg.eigvalsh(self.m1)[0])

    @property
    def m2_star(self) -> float:
        return float(self.m2_at_nodes().min())


class ConditionDiagnostics(BaseModel):
    """Outcome of one condition with the sample point where it is tightest."""

    model_config = ConfigDict(frozen=True)

    name: str
    value: float
    passed: bool
    worst_x: float | None = None
    worst_probe: tuple[float, ...] | None = None
    note: str | None = None


class CertificateReport(BaseModel):
    """Margins, coupling, verdict and where each condition was tightest.

    ``lambda_star`` is set only when all four conditions pass.
    """

    model_config = ConfigDict(frozen=True)

    mode: CertificateMode
    lambda1: float
    lambda2: float
    beta: float
    sigma: float
    lambda_star: float | None
    m1_star: float
    m2_star: float
    condition_pass: tuple[bool, bool, bool, bool]
    diagnostics: tuple[ConditionDiagnostics, ...] = ()
    lambda_source: LambdaSource = LambdaSource.FLOOR
    gamma_mode: GammaMode = GammaMode.CONSTANT
    metric: str = "constant"
    """Metrics are time-invariant in every check."""

    sampling: SamplingSettings | None = None
    premise: str | None = None
    cross_jacobian_bound: float | None = None
    constants: dict[str, float] = {}
    """Model-specific intermediate quantities (e.g. the translation beta_u)."""

    @model_validator(mode="after")
    def _check_rate(self) -> Self:
        if self.lambda_star is not None and not all(self.condition_pass):
            raise ValueError("lambda_star is only defined when every condition passes")
        return self

    @computed_field
    @property
    def certified(self) -> bool:
        return all(self.condition_pass)


class EigenReport(BaseModel):
    """Spectral summary of one assembled diffusion operator."""

    model_config = ConfigDict(frozen=True)

    theta: float
    lambda_bound: float
    lambda_numeric: float
    residual: float
    null_eigenvalue: float
    n: int
