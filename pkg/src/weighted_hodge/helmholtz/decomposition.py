"""Weighted Helmholtz splitting on a truncated shell.

Given ``F``, find a potential ``u`` vanishing on both spheres with

    <eps rho^(2s) grad u, grad phi> = <eps rho^(2s) F, grad phi>

for every discrete test potential ``phi``. ``grad u`` is the gradient part;
``F - grad u`` is weighted-solenoidal: its product with ``eps rho^(2s)`` has
vanishing weak divergence. Gradients and pairings are the discrete ones from
:mod:`operators`, so orthogonality holds up to the solver tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..errors import GridError, InadmissibleMedium
from ..weighted_spaces import check_admissibility, require_valid_weight
from .grid import Medium, ShellGrid, _values
from .operators import gradient_matrix
from .solver import pcg

__all__ = [
    "DecompositionResult",
    "node_weight",
    "weight_operator",
    "weighted_decompose",
    "compute_dirichlet_field",
    "project_off_dirichlet",
]


@dataclass
class DecompositionResult:
    grad_part: np.ndarray
    sol_part: np.ndarray
    potential: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    correction_part: Optional[np.ndarray] = None
    correction_coefficients: Optional[np.ndarray] = None

    def total(self) -> np.ndarray:
        out = self.grad_part + self.sol_part
        if self.correction_part is not None:
            out = out + self.correction_part
        return out


def _check_medium(eps: Medium, s: float):
    if eps.kind != "identity" and not check_admissibility(eps.tau, s, "epsilon"):
        raise InadmissibleMedium(f"decay rate tau={eps.tau} is not admissible for s={s}")


def node_weight(grid: ShellGrid, s: float) -> np.ndarray:
    """Quadrature weight times rho^(2s) at every node."""
    return grid.weights * (1.0 + grid.node_r**2) ** s


def weight_operator(grid: ShellGrid, eps: Medium, s: float):
    """Sparse ``(3 size, 3 size)`` operator of eps rho^(2s) times quadrature weights."""
    w = node_weight(grid, s)
    if eps.is_scalar:
        return sp.diags(np.repeat(w * eps.scalar(grid.node_r), 3))
    blocks = eps.matrices(grid.points) * w[:, None, None]
    idx = np.arange(grid.size)
    return sp.bsr_matrix((blocks, idx, np.arange(grid.size + 1)),
                         shape=(3 * grid.size, 3 * grid.size)).tocsr()


def weighted_inner(grid, eps, s, a, b) -> float:
    W = weight_operator(grid, eps, s)
    return float(_values(a).ravel() @ (W @ _values(b).ravel()))


def _split(grid: ShellGrid):
    interior = ~grid.boundary_mask()
    G = gradient_matrix(grid)
    return G, G[:, interior].tocsc(), interior


def weighted_decompose(F, s: float, eps: Medium, grid: ShellGrid, tol: float = 1e-10,
                       check_weight: bool = True) -> DecompositionResult:
    """Split ``F`` into a gradient and a weighted-solenoidal part."""
    F = _values(F)
    if F.shape != (grid.size, 3):
        raise GridError(f"field shape {F.shape} does not match grid ({grid.size}, 3)")
    if not np.all(np.isfinite(F)):
        raise GridError("field samples must be finite")
    if check_weight:
        require_valid_weight(s)
    _check_medium(eps, s)

    G, G_I, interior = _split(grid)
    W = weight_operator(grid, eps, s)
    WG = (W @ G_I).tocsc()
    A = (G_I.T @ WG).tocsr()
    b = WG.T @ F.ravel()
    u_I, info = pcg(A, b, tol=tol)

    u = np.zeros(grid.size)
    u[interior] = u_I
    grad = (G @ u).reshape(grid.size, 3)
    sol = F - grad

    f_norm2 = float(F.ravel() @ (W @ F.ravel()))
    cross = float(grad.ravel() @ (W @ sol.ravel()))
    weak = WG.T @ sol.ravel()
    # scale without cancellation, so a field that is already solenoidal
    # does not turn rounding noise into an O(1) relative residual
    b_norm = max(float(np.linalg.norm(b)), float(np.linalg.norm(abs(WG).T @ np.abs(F.ravel()))))
    recon = float(np.max(np.abs(grad + sol - F)) / max(np.max(np.abs(F)), 1e-300))
    diag = {
        "orthogonality": abs(cross) / f_norm2 if f_norm2 > 0 else 0.0,
        "weak_divergence": float(np.linalg.norm(weak)) / b_norm if b_norm > 0 else 0.0,
        "iterations": info.iterations,
        "reconstruction_error": recon,
        "s": float(s),
    }
    return DecompositionResult(grad, sol, u, diag)


def compute_dirichlet_field(eps: Medium, grid: ShellGrid, tol: float = 1e-10) -> np.ndarray:
    """Gradient of the potential with div(eps grad v) = 0, v = 1 on r0, v = 0 on R."""
    G, G_I, interior = _split(grid)
    W = weight_operator(grid, eps, 0.0)
    v_b = np.zeros(grid.size)
    v_b[grid.radial_index() == 0] = 1.0
    WG = (W @ G_I).tocsc()
    A = (G_I.T @ WG).tocsr()
    b = -(WG.T @ (G @ v_b))
    v_I, _ = pcg(A, b, tol=tol)
    v = v_b.copy()
    v[interior] = v_I
    return (G @ v).reshape(grid.size, 3)


def project_off_dirichlet(F, eps: Medium, grid: ShellGrid, H=None, tol: float = 1e-10):
    """F - (<eps F, H> / <eps H, H>) H for the ball's single Dirichlet field H."""
    F = _values(F)
    if H is None:
        H = compute_dirichlet_field(eps, grid, tol)
    epsH = eps.apply(grid.points, H)
    coef = grid.inner(F, epsH) / grid.inner(H, epsH)
    return F - coef * H
