"""Closed-form certificates for one Fickian species: dz/dt = d z_xx + a(x) z."""

import math
from collections.abc import Callable

from rd_contract.core.diffusion import LAMBDA_STAR
from rd_contract.core.errors import InvalidParameterError, NoBracketError
from rd_contract.core.grid import integrate_values
from rd_contract.core.utils.logging import logger
from rd_contract.types.certificate import CertificateMode, CertificateReport, ConditionDiagnostics
from rd_contract.types.grid import ScalarField

from .conditions import coupling_sigma, small_gain


def _scalar_report(
    lambda1: float, lambda2: float, beta: float, constants: dict[str, float], worst_x: float | None = None
) -> CertificateReport:
    passed, rate = small_gain(lambda1, lambda2, beta, 1.0, 1.0)
    diagnostics = (
        ConditionDiagnostics(name="lambda1", value=lambda1, passed=lambda1 > 0.0),
        ConditionDiagnostics(name="lambda2", value=lambda2, passed=lambda2 > 0.0, worst_x=worst_x),
        ConditionDiagnostics(name="beta", value=beta, passed=math.isfinite(beta)),
        ConditionDiagnostics(name="small_gain", value=lambda1 * lambda2, passed=passed),
    )
    condition_pass = (lambda1 > 0.0, lambda2 > 0.0, math.isfinite(beta), passed)
    return CertificateReport(
        mode=CertificateMode.FULL_THEOREM,
        lambda1=lambda1,
        lambda2=lambda2,
        beta=beta,
        sigma=coupling_sigma(beta, 1.0, 1.0),
        lambda_star=rate if all(condition_pass) else None,
        m1_star=1.0,
        m2_star=1.0,
        condition_pass=condition_pass,
        diagnostics=diagnostics,
        constants=constants,
    )


def certify_scalar_fickian(a: ScalarField, d: float) -> CertificateReport:
    """Certificate with M1 = M2 = 1: lambda1 = -a_bar, lambda2 = d pi^2 - a*, beta = 2 ||a_perp||.

    Every quantity is computed by quadrature on the grid of ``a``.

    Raises:
        InvalidParameterError: If d is not positive
    """
    if not d > 0.0:
        raise InvalidParameterError(f"Diffusion coefficient must be positive, got {d}")
    values = a.values
    a_bar = float(integrate_values(values, a.grid))
    a_perp = values - a_bar
    perp_sq = float(integrate_values(a_perp**2, a.grid))
    idx = int(values.argmax())
    report = _scalar_report(
        -a_bar,
        d * LAMBDA_STAR - float(values[idx]),
        2.0 * math.sqrt(perp_sq),
        {"a_bar": a_bar, "a_sup": float(values[idx]), "a_perp_sq": perp_sq, "d": d},
        worst_x=float(a.grid.nodes[idx]),
    )
    logger.debug(f"Scalar certificate: a_bar={a_bar:.6g} a*={values[idx]:.6g} ||a_perp||^2={perp_sq:.6g}")
    return report


def certify_scalar_small_omega(epsilon: float, omega: float) -> CertificateReport:
    """Scalar certificate of a(x) = sin(omega x) - mean - epsilon, d = epsilon/pi^2, for small omega.

    Uses a* ~ omega/2 - epsilon and ||a_perp||^2 ~ omega^2/12, so lambda1 = epsilon,
    lambda2 = 2 epsilon - omega/2 and beta^2 = omega^2/3.
    """
    if not epsilon > 0.0 or omega < 0.0:
        raise InvalidParameterError(f"Need epsilon > 0 and omega >= 0, got {epsilon}, {omega}")
    return _scalar_report(
        epsilon,
        2.0 * epsilon - 0.5 * omega,
        omega / math.sqrt(3.0),
        {"epsilon": epsilon, "omega": omega},
    )


def small_omega_threshold(epsilon: float) -> float:
    """Largest certified omega of the small-omega path, (sqrt(33) - 3) epsilon."""
    return (math.sqrt(33.0) - 3.0) * epsilon


def certified_boundary(predicate: Callable[[float], bool], lo: float, hi: float, tol: float) -> float:
    """Bisect for the parameter where ``predicate`` flips.

    Raises:
        NoBracketError: If the predicate agrees at both ends
    """
    if not lo < hi:
        raise InvalidParameterError(f"Need lo < hi, got [{lo}, {hi}]")
    at_lo = predicate(lo)
    if at_lo == predicate(hi):
        raise NoBracketError(f"Certificate verdict is {at_lo} at both {lo} and {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid) == at_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
