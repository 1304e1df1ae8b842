"""Cut-off potential towers, the correction space and coefficient extraction.

For a decaying potential field ``P`` of order ``n`` and a radial cutoff ``eta``
the correction field is

    B = box_eps(eta P) = grad div(eta P) - eps^{-1} curl curl(eta P)
      = GD - eps^{-1} (GD - L),

with ``L = Delta(eta P)`` and ``GD = grad div(eta P)``. Using that ``P`` is
harmonic, homogeneous of degree ``d = t + 1`` and has radial component
``kappa r z^0``:

    L  = P (eta'' + 2 eta'/r + 2 d eta'/r)
    GD = grad(Q y),   Q = (eta' r kappa + eta) r^t.

For ``eps = Id`` the field is supported in the cutoff annulus; otherwise it
carries the tail ``(Id - eps^{-1}) grad z^0`` outside it.

Coefficients of the correction part of a field are read off by pairing with
growing Dirichlet fields ``grad((r^n - r0^(2n+1) r^(-n-1)) y_{n,m})``. These
are curl- and divergence-free and have zero tangential trace on the inner
sphere, so gradients of potentials vanishing on both spheres and
divergence-free fields pair to zero, apart from a flux term on the outer
sphere that decays as the truncation radius grows.
"""
from __future__ import annotations

import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..errors import EmptyBasis, InvalidWeight, KindMismatch, SingularGram
from ..sphere_calculus import (
    build_quadrature,
    eigenvalue,
    frame_arrays,
    real_sph_harm,
    real_sph_harm_surface_grad,
    to_cartesian,
    to_polar,
)
from ..towers import TowerIndex, base_degree, eval_tower_array, field_kind, homogeneity_degree, xi_coeff
from ..weighted_spaces import SpaceBasisSpec, enumerate_basis, require_valid_weight
from .decomposition import DecompositionResult, weighted_decompose
from .grid import Medium, ShellGrid, _values
from .operators import Cutoff, CutoffSpec, make_cutoff

__all__ = [
    "potential_kappa",
    "cutoff_tower_laplacian",
    "correction_field",
    "correction_indices",
    "build_correction_basis",
    "growing_dirichlet_field",
    "growing_dirichlet_trace",
    "growing_dirichlet_indices",
    "witness_fields",
    "correction_gram",
    "extract_correction_coefficients",
    "decompose_with_correction",
    "flux_pairing",
]


def potential_kappa(sign, n: int) -> float:
    """Ratio e_r . P / (r z^0) for the potential field of order n."""
    t = base_degree(sign, n)
    return (1.0 - 2.0 * (t + 2) * xi_coeff(sign, n, 1)) / (t + 1)


def _default_cutoff(grid: ShellGrid, cutoff) -> Cutoff:
    if cutoff is None:
        cutoff = CutoffSpec.default_for(grid)
    if isinstance(cutoff, CutoffSpec):
        cutoff.check_grid(grid)
        cutoff = make_cutoff(cutoff)
    return cutoff


def cutoff_tower_laplacian(idx: TowerIndex, cutoff: Cutoff, x) -> np.ndarray:
    """Delta(eta z) for a scalar tower z (Z, even U, even exceptional)."""
    if field_kind(idx) != "scalar":
        raise KindMismatch("cutoff Laplacian is implemented for scalar towers")
    x = np.asarray(x, float)
    r = np.linalg.norm(x, axis=-1)
    eta, d1, d2 = cutoff(r)
    z = eval_tower_array(idx, x)
    deg = homogeneity_degree(idx)
    ell = idx.floor if idx.family == "Z" else idx.floor // 2
    lower = 0.0 if ell == 0 else eval_tower_array(idx.with_floor(idx.floor - (1 if idx.family == "Z" else 2)), x)
    return (d2 + 2 * d1 / r) * z + 2 * d1 * deg / r * z + eta * lower


def correction_field(idx: TowerIndex, cutoff: Cutoff, eps: Medium, x) -> np.ndarray:
    """box_eps(eta P) at points ``x`` for a potential-field index ``idx``."""
    if idx.family != "P":
        raise KindMismatch("correction fields are built from P towers")
    x = np.asarray(x, float)
    r, phi, theta = to_polar(x)
    e_r, _, _ = frame_arrays(phi, theta)
    y = real_sph_harm(idx.n, idx.m, phi, theta)
    Y = real_sph_harm_surface_grad(idx.n, idx.m, phi, theta)
    t = base_degree(idx.sign, idx.n)
    d = t + 1
    kap = potential_kappa(idx.sign, idx.n)
    eta, d1, d2 = cutoff(r)

    P = eval_tower_array(idx, x)
    L = (d2 + 2 * d1 / r + 2 * d * d1 / r)[..., None] * P
    rt = r**t
    Q = (d1 * r * kap + eta) * rt
    Qp = (d2 * r * kap + d1 * kap + d1) * rt + (d1 * r * kap + eta) * t * r ** (t - 1)
    GD = (Qp * y)[..., None] * e_r + (Q / r)[..., None] * Y
    return GD - eps.apply_inverse(x, GD - L)


def correction_indices(s: float) -> List[TowerIndex]:
    """Decaying potential fields spanning the correction space at weight s."""
    require_valid_weight(s)
    if not s > 1.5:
        raise EmptyBasis(f"no correction space for s={s} <= 3/2")
    basis = enumerate_basis(SpaceBasisSpec("Pbar", s - 2.0))
    if not basis:
        raise EmptyBasis(f"no correction space for s={s}")
    return basis


def build_correction_basis(s: float, eps: Medium, cutoff, grid: ShellGrid) -> List[np.ndarray]:
    cut = _default_cutoff(grid, cutoff)
    return [correction_field(idx, cut, eps, grid.points) for idx in correction_indices(s)]


# --------------------------------------------------------------------------
# growing Dirichlet fields
# --------------------------------------------------------------------------

def _growing_profile(n, r, r0):
    c = r0 ** (2 * n + 1)
    g = r**n - c * r ** (-n - 1)
    gp = n * r ** (n - 1) + (n + 1) * c * r ** (-n - 2)
    return g, gp


def growing_dirichlet_field(n: int, m: int, point, r0: float = 1.0) -> np.ndarray:
    """grad((r^n - r0^(2n+1) r^(-n-1)) y_{n,m}) for the ball of radius r0."""
    if n < 1:
        raise ValueError("growing Dirichlet fields need n >= 1")
    x = np.asarray(point, float)
    r, phi, theta = to_polar(x)
    e_r, _, _ = frame_arrays(phi, theta)
    y = real_sph_harm(n, m, phi, theta)
    Y = real_sph_harm_surface_grad(n, m, phi, theta)
    g, gp = _growing_profile(n, r, r0)
    return (gp * y)[..., None] * e_r + (g / r)[..., None] * Y


def growing_dirichlet_trace(n: int, m: int, phi, theta, r0: float = 1.0) -> np.ndarray:
    """Tangential trace on the sphere r = r0, evaluated in the moving frame.

    The radius is taken as ``r0`` itself rather than recovered from Cartesian
    coordinates, so the profile factor vanishes without rounding.
    """
    if n < 1:
        raise ValueError("growing Dirichlet fields need n >= 1")
    g, _ = _growing_profile(n, np.asarray(r0, float), r0)
    return (g / r0) * real_sph_harm_surface_grad(n, m, phi, theta)


def growing_dirichlet_indices(s: float):
    """(n, m) with sigma = n - 1 < -s - 3/2, i.e. growing fields in L2_s."""
    out = []
    n = 1
    while n - 1 < -s - 1.5:
        out += [(n, m) for m in range(1, 2 * n + 2)]
        n += 1
    return out


def witness_fields(indices: Sequence[TowerIndex], grid: ShellGrid) -> List[np.ndarray]:
    return [growing_dirichlet_field(idx.n, idx.m, grid.points, grid.r0) for idx in indices]


# --------------------------------------------------------------------------
# coefficient extraction
# --------------------------------------------------------------------------

def _pair(grid, eps, F, E):
    return grid.inner(eps.apply(grid.points, _values(F)), E)


def correction_gram(basis, witnesses, eps: Medium, grid: ShellGrid) -> np.ndarray:
    """M[i, j] = <eps B_i, E_j>."""
    return np.array([[_pair(grid, eps, B, E) for E in witnesses] for B in basis])


def extract_correction_coefficients(F, s: float, eps: Medium, grid: ShellGrid, cutoff=None,
                                    basis=None, gram=None, cond_limit: float = 1e12):
    """Coefficients c with F - sum c_i B_i pairing to zero against every witness."""
    idxs = correction_indices(s)
    if basis is None:
        basis = build_correction_basis(s, eps, cutoff, grid)
    witnesses = witness_fields(idxs, grid)
    if gram is None:
        gram = correction_gram(basis, witnesses, eps, grid)
    if not np.all(np.isfinite(gram)) or np.linalg.cond(gram) > cond_limit:
        raise SingularGram("correction Gram matrix is singular; basis and witnesses do not match")
    f = np.array([_pair(grid, eps, F, E) for E in witnesses])
    return lu_solve(lu_factor(gram.T), f)


def decompose_with_correction(F, s: float, eps: Medium, grid: ShellGrid, tol: float = 1e-10,
                              cutoff=None, inner_weight: float = 0.0) -> DecompositionResult:
    """Remove the correction part, then split the remainder.

    The remainder is split in the ``<eps rho^(2 inner_weight) ., .>`` product;
    the default 0 gives the gradient / eps^{-1}-solenoidal pair.
    """
    require_valid_weight(s)
    cut = _default_cutoff(grid, cutoff)
    basis = build_correction_basis(s, eps, cut, grid)
    coef = extract_correction_coefficients(F, s, eps, grid, basis=basis)
    corr = np.zeros((grid.size, 3))
    for c, B in zip(coef, basis):
        corr += c * B
    F = _values(F)
    res = weighted_decompose(F - corr, inner_weight, eps, grid, tol)
    recon = float(np.max(np.abs(res.grad_part + res.sol_part + corr - F))
                  / max(np.max(np.abs(F)), 1e-300))
    res.correction_part = corr
    res.correction_coefficients = coef
    res.diagnostics = dict(res.diagnostics)
    res.diagnostics.update({
        "post_subtraction_orthogonality": res.diagnostics.pop("orthogonality"),
        "reconstruction_error": recon,
        "correction_dimension": len(basis),
        "s": float(s),
        "inner_weight": float(inner_weight),
    })
    return res


def flux_pairing(cutoff: Cutoff, idx: Optional[TowerIndex] = None, radial_nodes: int = 16,
                 n_ang: int = 4):
    """Integral of Delta(eta z) over the cutoff annulus, and the flux oracle.

    Returns ``(volume_integral, boundary_flux)``. The default tower is the
    exceptional ``1/r``, for which both equal ``-4 pi``.
    """
    if idx is None:
        idx = TowerIndex("ExceptionalU", -1, 0, 0, 1)
    r1, r2 = cutoff.spec.r1, cutoff.spec.r2
    t, w = np.polynomial.legendre.leggauss(radial_nodes)
    r = 0.5 * (r2 - r1) * t + 0.5 * (r2 + r1)
    wr = 0.5 * (r2 - r1) * w * r * r
    quad = build_quadrature(n_ang)
    pts = to_cartesian(quad.phi[None, :], quad.theta[None, :], r[:, None])
    vol = float(wr @ (cutoff_tower_laplacian(idx, cutoff, pts) @ quad.weights))

    deg = homogeneity_degree(idx)

    def outward_flux(radius):
        p = to_cartesian(quad.phi, quad.theta, radius)
        z = eval_tower_array(idx, p)
        eta, d1, _ = cutoff(np.full(quad.size, radius))
        dr = d1 * z + eta * deg / radius * z
        return radius**2 * float(quad.weights @ dr)

    return vol, outward_flux(r2) - outward_flux(r1)
