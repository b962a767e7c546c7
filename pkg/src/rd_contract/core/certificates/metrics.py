"""Metric construction: Lyapunov M1 for a Hurwitz average and diagonal witnesses for 2x2 blocks."""

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from rd_contract.core.errors import InvalidMetricError
from rd_contract.core.utils.logging import logger

GAMMA_GRID = np.logspace(-4.0, 4.0, 161)


def lyapunov_metric(a: np.ndarray, q: float = 2.0) -> np.ndarray:
    """Solve A^T M + M A = -q I for M.

    Raises:
        InvalidMetricError: If the solution is not positive definite (A is not Hurwitz)
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    m = solve_continuous_lyapunov(a.T, -q * np.eye(a.shape[0]))
    m = 0.5 * (m + m.T)
    smallest = float(np.linalg.eigvalsh(m)[0])
    if smallest <= 0.0:
        raise InvalidMetricError(f"Lyapunov solution is not positive definite (min eigenvalue {smallest:.3e})")
    return m


def _generalized_margin(b: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of -sym(diag(1, g) B) w.r.t. diag(1, g), for every g."""
    p11 = -b[0, 0] * np.ones_like(gammas)
    p22 = -gammas * b[1, 1]
    p12 = -0.5 * (b[0, 1] + gammas * b[1, 0])
    q22 = p22 / gammas
    q12 = p12 / np.sqrt(gammas)
    return 0.5 * (p11 + q22) - np.hypot(0.5 * (p11 - q22), q12)


def diagonal_witness(b: np.ndarray) -> tuple[float, float]:
    """Best ratio g for Gamma = diag(1, g) over a log grid plus -b12/b21, with its margin."""
    candidates = GAMMA_GRID
    if b[1, 0] != 0.0 and -b[0, 1] / b[1, 0] > 0.0:
        candidates = np.append(candidates, -b[0, 1] / b[1, 0])
    margins = _generalized_margin(b, candidates)
    best = int(np.argmax(margins))
    return float(candidates[best]), float(margins[best])


def diagonal_stability_2x2(b: np.ndarray) -> tuple[bool, np.ndarray | None]:
    """Diagonal stability of a 2x2 matrix B: b11 < 0, b22 < 0 and det B > 0.

    On pass, a witness Gamma = diag(1, g) with -sym(Gamma B) positive definite is returned.

    Returns:
        (passed, Gamma or None)
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (2, 2):
        raise ValueError(f"Expected a 2x2 matrix, got shape {b.shape}")
    passed = bool(b[0, 0] < 0.0 and b[1, 1] < 0.0 and np.linalg.det(b) > 0.0)
    if not passed:
        return False, None

    ratio, _ = diagonal_witness(b)
    gamma = np.diag([1.0, ratio])
    sym = -0.5 * (gamma @ b + b.T @ gamma)
    if float(np.linalg.eigvalsh(sym)[0]) <= 0.0:
        logger.warning(f"Minor test passed but no diagonal witness found on the grid for B={b.tolist()}")
        return True, None
    return True, gamma


def pointwise_gamma(blocks: np.ndarray) -> np.ndarray:
    """Per-node witness diagonals for a stack of 2x2 blocks, shape (n, 2).

    Nodes without a witness fall back to the identity, which leaves the failure visible in the margin.
    """
    gammas = np.ones((blocks.shape[0], 2))
    for k, block in enumerate(blocks):
        passed, gamma = diagonal_stability_2x2(block)
        if passed and gamma is not None:
            gammas[k] = np.diag(gamma)
    return gammas
