"""Finite-difference vector calculus on a :class:`ShellGrid`, and the cutoff.

The gradient is assembled once as a sparse matrix ``G`` of shape
``(3 * size, size)``; row ``3 * node + c`` holds the Cartesian component
``c`` at ``node``. Derivatives are second-order central differences in
``xi = log r``, periodic in azimuth, and three-point non-uniform in latitude.
Latitude stencils at the first and last ring reach across the pole to the
ring node half a turn away.

The radial end rows are first-order one-sided differences. Together with the
trapezoid weights of :class:`ShellGrid` this makes the radial derivative
summation-by-parts, so the weak divergence of a smooth divergence-free field
carries no O(1) boundary forcing. A second-order three-point end stencil
breaks that property and the central scheme's odd-even mode then leaks
solenoidal content into the gradient part.

Divergence and curl are built from the Jacobian ``G v_i`` of each Cartesian
component. The scheme is not mimetic: ``div(curl v)`` is only O(h^2) small.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from ..errors import GridError
from .grid import ShellGrid, _values

__all__ = [
    "CutoffSpec",
    "Cutoff",
    "make_cutoff",
    "gradient_matrix",
    "discrete_grad",
    "discrete_jacobian",
    "discrete_div",
    "discrete_curl",
]


# --------------------------------------------------------------------------
# 1-d stencils
# --------------------------------------------------------------------------

def _d_xi(n, h):
    D = sp.lil_matrix((n, n))
    for i in range(1, n - 1):
        D[i, i - 1] = -0.5 / h
        D[i, i + 1] = 0.5 / h
    # first-order end rows: with trapezoid weights the operator sums by parts
    D[0, 0:2] = np.array([-1.0, 1.0]) / h
    D[n - 1, n - 2:n] = np.array([-1.0, 1.0]) / h
    return D.tocsr()


def _d_phi(n, h):
    D = sp.lil_matrix((n, n))
    for j in range(n):
        D[j, (j + 1) % n] += 0.5 / h
        D[j, (j - 1) % n] -= 0.5 / h
    return D.tocsr()


def _three_point(a, b):
    """Weights for f'(0) from f(-a), f(0), f(b)."""
    return -b / (a * (a + b)), (b - a) / (a * b), a / (b * (a + b))


def _d_theta(theta, n_phi):
    n_t = theta.size
    if n_phi % 2:
        raise GridError("pole stencils need an even number of azimuth nodes")
    half = n_phi // 2
    D = sp.lil_matrix((n_phi * n_t, n_phi * n_t))
    for j in range(n_phi):
        opp = (j + half) % n_phi
        for k in range(n_t):
            row = j * n_t + k
            if k > 0:
                lo_col, lo_pos = j * n_t + k - 1, theta[k - 1]
            else:
                lo_col, lo_pos = opp * n_t, -math.pi - theta[0]
            if k < n_t - 1:
                hi_col, hi_pos = j * n_t + k + 1, theta[k + 1]
            else:
                hi_col, hi_pos = opp * n_t + n_t - 1, math.pi - theta[-1]
            wl, wc, wh = _three_point(theta[k] - lo_pos, hi_pos - theta[k])
            D[row, lo_col] += wl
            D[row, row] += wc
            D[row, hi_col] += wh
    return D.tocsr()


@lru_cache(maxsize=8)
def gradient_matrix(grid: ShellGrid) -> sp.csr_matrix:
    n_ang = grid.n_angular
    I_r = sp.identity(grid.n_r, format="csr")
    dr = sp.kron(sp.diags(1.0 / grid.r) @ _d_xi(grid.n_r, grid.dxi), sp.identity(n_ang), format="csr")
    dphi_1d = _d_phi(grid.n_phi, 2 * math.pi / grid.n_phi)
    dphi = sp.kron(I_r, sp.kron(dphi_1d, sp.identity(grid.n_theta)), format="csr")
    dtheta = sp.kron(I_r, _d_theta(grid.theta_1d, grid.n_phi), format="csr")

    e_r, e_phi, e_theta = grid.frames
    r = grid.node_r
    cos_t = np.cos(grid.node_theta)
    blocks = []
    for c in range(3):
        blocks.append(sp.diags(e_r[:, c]) @ dr
                      + sp.diags(e_phi[:, c] / (r * cos_t)) @ dphi
                      + sp.diags(e_theta[:, c] / r) @ dtheta)
    stacked = sp.vstack(blocks, format="csr")  # row c * size + node
    size = grid.size
    order = (np.arange(3)[None, :] * size + np.arange(size)[:, None]).ravel()
    return stacked[order]


def discrete_grad(grid: ShellGrid, u) -> np.ndarray:
    u = _values(u)
    if u.ndim != 1:
        raise GridError("gradient needs a scalar field")
    return (gradient_matrix(grid) @ u).reshape(grid.size, 3)


def discrete_jacobian(grid: ShellGrid, v) -> np.ndarray:
    """``J[node, i, a] = d v_i / d x_a``."""
    v = _values(v)
    if v.ndim != 2:
        raise GridError("Jacobian needs a vector field")
    G = gradient_matrix(grid)
    return np.stack([(G @ v[:, i]).reshape(grid.size, 3) for i in range(3)], axis=1)


def discrete_div(grid: ShellGrid, v) -> np.ndarray:
    J = discrete_jacobian(grid, v)
    return J[:, 0, 0] + J[:, 1, 1] + J[:, 2, 2]


def discrete_curl(grid: ShellGrid, v) -> np.ndarray:
    J = discrete_jacobian(grid, v)
    return np.stack([J[:, 2, 1] - J[:, 1, 2],
                     J[:, 0, 2] - J[:, 2, 0],
                     J[:, 1, 0] - J[:, 0, 1]], axis=-1)


# --------------------------------------------------------------------------
# cutoff
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CutoffSpec:
    r1: float
    r2: float

    def __post_init__(self):
        if not 0 < self.r1 < self.r2:
            raise ValueError("cutoff needs 0 < r1 < r2")

    def check_grid(self, grid: ShellGrid):
        if not (grid.r0 < self.r1 and self.r2 <= 0.5 * grid.R * (1 + 1e-12)):
            raise GridError("cutoff needs r0 < r1 < r2 <= R/2")

    @classmethod
    def default_for(cls, grid: ShellGrid):
        return cls(2.0 * grid.r0, 4.0 * grid.r0)


@dataclass(frozen=True)
class Cutoff:
    """Quintic smoothstep: 0 below r1, 1 above r2, C^2 across both."""

    spec: CutoffSpec

    def _t(self, r):
        r1, r2 = self.spec.r1, self.spec.r2
        return np.clip((np.asarray(r, float) - r1) / (r2 - r1), 0.0, 1.0)

    def eta(self, r):
        t = self._t(r)
        return t**3 * (10 - 15 * t + 6 * t * t)

    def d1(self, r):
        t = self._t(r)
        return 30 * t * t * (1 - t) ** 2 / (self.spec.r2 - self.spec.r1)

    def d2(self, r):
        t = self._t(r)
        return 60 * t * (1 - t) * (1 - 2 * t) / (self.spec.r2 - self.spec.r1) ** 2

    def __call__(self, r):
        return self.eta(r), self.d1(r), self.d2(r)


def make_cutoff(spec: CutoffSpec) -> Cutoff:
    return Cutoff(spec)
