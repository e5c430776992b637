# -*- coding: utf-8 -*-

"""
Smallest eigenpair of a symmetric banded pencil ``A u = lambda B u``.

The eigenvalue is found by bisection on the inertia of ``A - lambda B``:
a banded Cholesky factorization succeeds iff the matrix is positive definite,
so ``lambda_min = sup {lambda : A - lambda B > 0}``. This only needs
factorizations, keeps full relative accuracy on the strongly graded matrices
of power weights, and needs no shift guess. The eigenvector is then obtained
by a few steps of inverse iteration at the final lower bracket.
"""

import typing as T
import logging
import dataclasses

import numpy as np
import scipy.sparse
import scipy.linalg

from .exc import PreconditionError
from .waiter import Waiter

logger = logging.getLogger(__name__)

EIGEN_TOL = 1.0e-10
MAX_ITERATIONS = 500


@dataclasses.dataclass
class EigenResult:
    """
    :param value: smallest eigenvalue.
    :param vector: eigenvector in the coordinates of the input matrices,
        scaled to max norm one and positive at its largest entry.
    :param iterations: bisection steps used.
    :param bracket: final ``(lower, upper)`` bracket of the eigenvalue.
    """

    value: float
    vector: np.ndarray
    iterations: int
    bracket: T.Tuple[float, float]


def bandwidth(matrix: scipy.sparse.spmatrix) -> int:
    coo = matrix.tocoo()
    if coo.nnz == 0:
        return 0
    return int(np.max(np.abs(coo.row - coo.col)))


def to_upper_banded(matrix: scipy.sparse.spmatrix, bw: int) -> np.ndarray:
    """
    Upper banded storage as used by :func:`scipy.linalg.cholesky_banded`,
    ``ab[bw + i - j, j] = a[i, j]``.
    """
    n = matrix.shape[0]
    ab = np.zeros((bw + 1, n))
    matrix = matrix.tocsr()
    for d in range(bw + 1):
        ab[bw - d, d:] = matrix.diagonal(d)
    return ab


def is_positive_definite(ab: np.ndarray) -> bool:
    try:
        scipy.linalg.cholesky_banded(ab, lower=False, check_finite=False)
    except np.linalg.LinAlgError:
        return False
    return True


def _normalize(x: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(x)))
    return x / x[i]


def smallest_eigenpair(
    A: scipy.sparse.spmatrix,
    B: scipy.sparse.spmatrix,
    scale: T.Optional[np.ndarray] = None,
    tol: float = EIGEN_TOL,
    max_iter: int = MAX_ITERATIONS,
    want_vector: bool = True,
) -> EigenResult:
    """
    Smallest ``lambda`` such that ``A - lambda B`` is singular, for symmetric
    ``A`` and ``B`` with ``B`` positive semidefinite.

    :param scale: positive diagonal used for the symmetric scaling
        ``D^{-1/2} (A, B) D^{-1/2}``, usually the natural mass of the problem.
    :param tol: relative width of the final bracket.
    :raises ConvergenceError: no bracket found or the loops ran out of
        iterations.
    """
    n = A.shape[0]
    if A.shape != (n, n) or B.shape != (n, n):
        raise PreconditionError("A and B must be square of the same size")
    if scale is not None:
        scale = np.asarray(scale, dtype=float)
        if np.any(~(scale > 0)):
            raise PreconditionError("scaling diagonal must be positive")
        S = scipy.sparse.diags(1.0 / np.sqrt(scale))
        A = S @ A @ S
        B = S @ B @ S
    A = A.tocsr()
    B = B.tocsr()
    bw = max(bandwidth(A), bandwidth(B))
    A_b = to_upper_banded(A, bw)
    B_b = to_upper_banded(B, bw)

    def definite(lam: float) -> bool:
        return is_positive_definite(A_b - lam * B_b)

    # upper bound from a Rayleigh quotient
    v = np.ones(n)
    vBv = float(v @ (B @ v))
    if not vBv > 0:
        raise PreconditionError("B vanishes on the trial vector, no finite eigenvalue")
    hi = float(v @ (A @ v)) / vBv
    step = max(abs(hi), 1.0) * 1.0e-9
    for _ in Waiter(max_iter, label="upper eigenvalue bracket"):
        if not definite(hi):
            break
        hi += step
        step *= 2.0
    lo = min(hi, 0.0) - 1.0
    step = max(abs(hi), 1.0)
    for _ in Waiter(max_iter, label="lower eigenvalue bracket"):
        if definite(lo):
            break
        lo -= step
        step *= 2.0
    logger.debug("eigenvalue bracket [%r, %r]", lo, hi)

    iterations = 0
    for attempt, _ in Waiter(max_iter, label="eigenvalue bisection"):
        iterations = attempt
        width = hi - lo
        if width <= tol * max(abs(lo), abs(hi)) + tol * 1.0e-2:
            break
        mid = 0.5 * (lo + hi)
        if definite(mid):
            lo = mid
        else:
            hi = mid
    value = 0.5 * (lo + hi)

    vector = np.zeros(n)
    if want_vector:
        cho = scipy.linalg.cholesky_banded(A_b - lo * B_b, lower=False)
        x = _normalize(np.ones(n))
        for _ in Waiter(max_iter, label="inverse iteration"):
            y = scipy.linalg.cho_solve_banded((cho, False), B @ x)
            y = _normalize(y)
            if np.max(np.abs(y - x)) < 1.0e-9:
                x = y
                break
            x = y
        vector = x
        if scale is not None:
            vector = _normalize(vector / np.sqrt(scale))
    logger.debug("smallest eigenvalue %r after %d bisection steps", value, iterations)
    return EigenResult(
        value=value,
        vector=vector,
        iterations=iterations,
        bracket=(lo, hi),
    )
