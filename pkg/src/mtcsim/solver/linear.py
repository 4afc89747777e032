"""
Jacobi-preconditioned conjugate gradients (scipy.sparse.linalg.cg).

Single-threaded sparse products keep residual histories and iteration
counts reproducible run to run.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import cg

from ..errors import ConvergenceError, SingularSystemError
from .assembly import LinearSystem

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class LinearSolution:
    x: np.ndarray
    iterations: int
    residual: float


def solve_linear(
    system: LinearSystem,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int | None = None,
    x0: np.ndarray | None = None,
) -> LinearSolution:
    """
    Solve an SPD system with Jacobi-preconditioned CG.

    Args:
        system: Assembled system
        tolerance: Relative residual target ||r|| / ||b||
        max_iterations: Iteration cap (default 10 x unknowns)
        x0: Optional starting vector

    Returns:
        LinearSolution with the iteration count and final relative residual

    Raises:
        SingularSystemError: on a non-positive diagonal or CG breakdown
        ConvergenceError: if the target is not reached within the cap
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be > 0")
    a = system.matrix
    b = system.rhs
    n = b.size
    if n == 0:
        return LinearSolution(x=np.zeros(0), iterations=0, residual=0.0)
    if max_iterations is None:
        max_iterations = 10 * n

    diag = a.diagonal()
    if np.any(diag <= 0):
        raise SingularSystemError("matrix has non-positive diagonal entries")

    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return LinearSolution(x=np.zeros(n), iterations=0, residual=0.0)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)

    def relative_residual(v: np.ndarray) -> float:
        return float(np.linalg.norm(b - a @ v)) / b_norm

    residual = relative_residual(x)
    if residual <= tolerance:
        return LinearSolution(x=x, iterations=0, residual=residual)

    iterations = 0

    def count(_xk):
        nonlocal iterations
        iterations += 1

    x, info = cg(
        a,
        b,
        x0=x,
        rtol=tolerance,
        atol=0.0,
        maxiter=max_iterations,
        M=sparse.diags(1.0 / diag),
        callback=count,
    )
    residual = relative_residual(x)
    if info < 0:
        raise SingularSystemError(f"CG broke down (scipy info {info})")
    if info > 0:
        raise ConvergenceError(
            f"CG did not converge in {max_iterations} iterations "
            f"(relative residual {residual:.3e}, target {tolerance:.1e})",
            residual=residual,
        )
    logger.debug("CG converged in %d iterations (residual %.3e)", iterations, residual)
    return LinearSolution(x=x, iterations=iterations, residual=residual)
