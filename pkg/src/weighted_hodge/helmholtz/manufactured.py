"""Manufactured fields with known decompositions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .correction import build_correction_basis, correction_indices
from .grid import Medium, ShellGrid

__all__ = [
    "OMEGA",
    "gradient_potential",
    "gradient_field",
    "toroidal_field",
    "poloidal_solenoidal_field",
    "ManufacturedField",
    "lemma_mix",
    "three_part_mix",
    "dirichlet_ball_field",
    "truncated_dirichlet_exact",
]

OMEGA = np.array([0.3, -0.5, 0.8])


def _radius(x):
    return np.linalg.norm(x, axis=-1)


def gradient_potential(x, r0=1.0):
    """u0 = (r - r0)^2 exp(-(r - r0)) (1 + x3 / r); zero on r0, negligible far out."""
    r = _radius(x)
    return (r - r0) ** 2 * np.exp(-(r - r0)) * (1 + x[..., 2] / r)


def gradient_field(x, r0=1.0):
    """Exact gradient of :func:`gradient_potential`."""
    r = _radius(x)
    e_r = x / r[..., None]
    q = r - r0
    f = q * q * np.exp(-q)
    fp = (2 * q - q * q) * np.exp(-q)
    a = 1 + x[..., 2] / r
    grad_a = (np.array([0.0, 0.0, 1.0]) - e_r * (x[..., 2] / r)[..., None]) / r[..., None]
    return (fp * a)[..., None] * e_r + f[..., None] * grad_a


def toroidal_field(x, omega=OMEGA):
    """(1 + r^2)^(-2) omega x x; tangential and divergence-free."""
    r = _radius(x)
    return ((1 + r * r) ** -2.0)[..., None] * np.cross(omega, x)


def poloidal_solenoidal_field(x, omega=OMEGA):
    """curl(a(r) omega x x) with a = (1 + r^2)^(-2).

    Equals ``2 a omega + (a'/r)(omega r^2 - x (x . omega))``; divergence-free
    with normal component ``2 a (omega . e_r)``.
    """
    r = _radius(x)
    a = (1 + r * r) ** -2.0
    ap_over_r = -4.0 * (1 + r * r) ** -3.0
    xo = x @ omega
    return (2 * a)[..., None] * omega + ap_over_r[..., None] * (
        (r * r)[..., None] * omega - x * xo[..., None])


@dataclass
class ManufacturedField:
    F: np.ndarray
    grad_part: np.ndarray
    sol_part: np.ndarray
    correction_part: Optional[np.ndarray] = None
    coefficients: Optional[np.ndarray] = None


def lemma_mix(grid: ShellGrid, s: float, eps: Medium) -> ManufacturedField:
    """grad u0 + rho^(-2s) eps^{-1} (S + T): the second summand has
    div(eps rho^(2s) .) = 0 exactly."""
    x = grid.points
    g = gradient_field(x, grid.r0)
    w = (1 + grid.node_r**2) ** (-s)
    sol = eps.apply_inverse(x, w[:, None] * (poloidal_solenoidal_field(x) + toroidal_field(x)))
    return ManufacturedField(g + sol, g, sol)


def three_part_mix(grid: ShellGrid, s: float, eps: Medium, coefficients=None,
                   cutoff=None) -> ManufacturedField:
    """sum c_i B_i + grad u0 + eps^{-1} S with S divergence-free."""
    x = grid.points
    basis = build_correction_basis(s, eps, cutoff, grid)
    if coefficients is None:
        coefficients = np.linspace(1.0, -0.5, len(basis)) + 0.25
    coefficients = np.asarray(coefficients, float)
    corr = sum(c * B for c, B in zip(coefficients, basis))
    g = gradient_field(x, grid.r0)
    sol = eps.apply_inverse(x, poloidal_solenoidal_field(x))
    return ManufacturedField(corr + g + sol, g, sol, corr, coefficients)


def dirichlet_ball_field(x):
    """e_r / r^2, the Dirichlet field of the exterior of a ball."""
    r = _radius(x)
    return x / (r**3)[..., None]


def truncated_dirichlet_exact(grid: ShellGrid) -> np.ndarray:
    """grad v for v = (1/r - 1/R) / (1/r0 - 1/R), the eps = Id shell solution."""
    c = 1.0 / (1.0 / grid.r0 - 1.0 / grid.R)
    return -c * dirichlet_ball_field(grid.points)
