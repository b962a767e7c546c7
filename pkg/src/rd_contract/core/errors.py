"""Exception hierarchy raised by the numerical modules.

Each class derives from the builtin a caller would already expect for the failure, so
``except ValueError`` around a constructor keeps working.
"""

from collections.abc import Sequence


class RDContractError(Exception):
    """Base class for all rd_contract errors."""


class InvalidGridError(RDContractError, ValueError):
    """Grid cannot be built from the requested parameters."""


class InvalidParameterError(RDContractError, ValueError):
    """A model or profile parameter is outside its admissible range."""


class InvalidProfileError(RDContractError, ValueError):
    """A profile field is not strictly positive."""


class InvalidSpecError(RDContractError, ValueError):
    """Diffusion or reaction specification is malformed."""


class InvalidMetricError(RDContractError, ValueError):
    """A contraction metric is not positive definite or not diagonal."""


class InvalidInvariantSetError(RDContractError, ValueError):
    """Invariant-set size is too small for the supplied initial state."""


class PremiseViolationError(RDContractError, ValueError):
    """A structural premise of a certificate fails on a probe."""

    def __init__(self, message: str, probe: Sequence[float] | None = None) -> None:
        super().__init__(message)
        self.probe = tuple(probe) if probe is not None else None


class NumericalFailureError(RDContractError, RuntimeError):
    """Eigensolve or linear algebra did not meet its residual tolerance."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class IntegrationFailureError(RDContractError, RuntimeError):
    """Time integration produced a non-finite or inadmissible state."""

    def __init__(self, message: str, time: float) -> None:
        super().__init__(f"{message} at t={time:.6g}")
        self.time = time


class DegenerateWindowError(RDContractError, RuntimeError):
    """Slope window holds too few samples or a vanishing norm."""


class NoBracketError(RDContractError, RuntimeError):
    """Bisection endpoints do not bracket a sign change."""
