"""Jacobi-preconditioned conjugate gradients."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import SolverDiverged

__all__ = ["CGInfo", "pcg"]


@dataclass(frozen=True)
class CGInfo:
    iterations: int
    relative_residual: float


def pcg(A, b, tol=1e-10, maxiter=None, x0=None):
    """Solve ``A x = b`` for symmetric positive definite ``A``.

    Stops when ``|b - A x| <= tol |b|``. The default iteration cap is
    ``50 sqrt(n)``; hitting it raises :class:`SolverDiverged`.
    """
    b = np.asarray(b, float)
    n = b.size
    if maxiter is None:
        maxiter = int(50 * math.sqrt(n)) + 1
    bnorm = float(np.linalg.norm(b))
    x = np.zeros(n) if x0 is None else np.array(x0, float)
    if bnorm == 0.0:
        return np.zeros(n), CGInfo(0, 0.0)
    diag = A.diagonal()
    if np.any(diag <= 0):
        raise SolverDiverged("matrix diagonal is not positive")
    inv_d = 1.0 / diag

    r = b - A @ x
    z = inv_d * r
    p = z.copy()
    rz = float(r @ z)
    res = float(np.linalg.norm(r))
    k = 0
    while res > tol * bnorm:
        if k >= maxiter:
            raise SolverDiverged(
                f"no convergence after {k} iterations (relative residual {res / bnorm:.3e})")
        Ap = A @ p
        pAp = float(p @ Ap)
        if pAp <= 0:
            raise SolverDiverged("operator is not positive definite along the search direction")
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        z = inv_d * r
        rz_new = float(r @ z)
        p *= rz_new / rz
        p += z
        rz = rz_new
        res = float(np.linalg.norm(r))
        k += 1
    return x, CGInfo(k, res / bnorm)
