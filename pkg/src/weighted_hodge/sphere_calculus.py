"""Real spherical harmonics, the polar frame and quadrature on the unit sphere.

Coordinates are azimuth ``phi`` in [0, 2*pi) and *latitude* ``theta`` in
(-pi/2, pi/2), so that a direction maps to

    x = (cos(phi) cos(theta), sin(phi) cos(theta), sin(theta)).

Harmonics ``y_{n,m}`` are real and orthonormal in L2(S^2). The intra-order
index ``m`` runs over 1..2n+1: ``m = 1`` is the zonal harmonic, ``m = 2k``
carries ``cos(k phi)`` and ``m = 2k + 1`` carries ``sin(k phi)``.

All evaluation routines accept numpy arrays for ``phi`` and ``theta`` and
broadcast; vector results get a trailing axis of length 3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidIndex, KindMismatch, PoleProximity

__all__ = [
    "Direction",
    "SphHarmIndex",
    "FrameAtDirection",
    "SphereQuadrature",
    "frame",
    "frame_arrays",
    "to_cartesian",
    "to_polar",
    "real_sph_harm",
    "real_sph_harm_derivs",
    "real_sph_harm_surface_grad",
    "eval_sph_harm",
    "eval_sph_harm_surface_grad",
    "laplace_beltrami_residual",
    "build_quadrature",
    "surface_inner_product",
    "eigenvalue",
]


@dataclass(frozen=True)
class Direction:
    phi: float
    theta: float

    def __post_init__(self):
        if not abs(self.theta) < 0.5 * math.pi:
            raise PoleProximity(f"latitude {self.theta} is not strictly inside (-pi/2, pi/2)")

    def cartesian(self) -> np.ndarray:
        return to_cartesian(self.phi, self.theta)


@dataclass(frozen=True)
class SphHarmIndex:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or not 1 <= self.m <= 2 * self.n + 1:
            raise InvalidIndex(f"need n >= 0 and 1 <= m <= 2n+1, got (n={self.n}, m={self.m})")

    @property
    def k(self) -> int:
        """Azimuthal wavenumber carried by this harmonic."""
        return self.m // 2


def eigenvalue(n: int) -> int:
    """lambda_n = n(n+1), the eigenvalue of -Laplace-Beltrami on order n."""
    return n * (n + 1)


# --------------------------------------------------------------------------
# frame
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameAtDirection:
    e_r: np.ndarray
    e_phi: np.ndarray
    e_theta: np.ndarray


def frame_arrays(phi, theta):
    """Return (e_r, e_phi, e_theta) as arrays of shape ``broadcast + (3,)``."""
    phi, theta = np.broadcast_arrays(np.asarray(phi, float), np.asarray(theta, float))
    cp, sp = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    zero = np.zeros_like(phi)
    e_r = np.stack([cp * ct, sp * ct, st], axis=-1)
    e_phi = np.stack([-sp, cp, zero], axis=-1)
    e_theta = np.stack([-st * cp, -st * sp, ct], axis=-1)
    return e_r, e_phi, e_theta


def frame(direction: Direction) -> FrameAtDirection:
    e_r, e_phi, e_theta = frame_arrays(direction.phi, direction.theta)
    return FrameAtDirection(e_r, e_phi, e_theta)


def to_cartesian(phi, theta, r=1.0):
    phi, theta, r = np.broadcast_arrays(
        np.asarray(phi, float), np.asarray(theta, float), np.asarray(r, float))
    ct = np.cos(theta)
    return np.stack([r * np.cos(phi) * ct, r * np.sin(phi) * ct, r * np.sin(theta)], axis=-1)


def to_polar(x):
    """Cartesian points ``(..., 3)`` to ``(r, phi, theta)``."""
    x = np.asarray(x, float)
    rho = np.hypot(x[..., 0], x[..., 1])
    r = np.hypot(rho, x[..., 2])
    phi = np.mod(np.arctan2(x[..., 1], x[..., 0]), 2 * np.pi)
    theta = np.arctan2(x[..., 2], rho)
    return r, phi, theta


# --------------------------------------------------------------------------
# harmonics
# --------------------------------------------------------------------------

def _check_nm(n, m):
    if n < 0 or not 1 <= m <= 2 * n + 1:
        raise InvalidIndex(f"need n >= 0 and 1 <= m <= 2n+1, got (n={n}, m={m})")


def _legendre_normalized(n, k, theta):
    """Fully normalized associated Legendre values P_n^k and P_{n-1}^k at
    t = sin(theta), via the three-term recurrence in t.

    Normalization: 2*pi * int_{-1}^{1} (P_n^k)^2 dt = 1.
    """
    t = np.sin(theta)
    c = np.cos(theta)
    p_kk = np.full_like(t, 1.0 / math.sqrt(4.0 * math.pi))
    for j in range(1, k + 1):
        p_kk = math.sqrt((2 * j + 1) / (2 * j)) * c * p_kk
    if n == k:
        return p_kk, np.zeros_like(t)
    prev2 = p_kk
    prev1 = math.sqrt(2 * k + 3) * t * p_kk
    a_prev = math.sqrt(2 * k + 3)
    for j in range(k + 2, n + 1):
        a = math.sqrt((4 * j * j - 1) / (j * j - k * k))
        cur = a * (t * prev1 - prev2 / a_prev)
        prev2, prev1, a_prev = prev1, cur, a
    return prev1, prev2


def real_sph_harm_derivs(n: int, m: int, phi, theta):
    """Return ``(y, dy/dphi, dy/dtheta)`` for the real orthonormal y_{n,m}."""
    _check_nm(n, m)
    phi, theta = np.broadcast_arrays(np.asarray(phi, float), np.asarray(theta, float))
    k = m // 2
    p, p_lower = _legendre_normalized(n, k, theta)
    t = np.sin(theta)
    c = np.cos(theta)
    coef = math.sqrt((2 * n + 1) * (n * n - k * k) / (2 * n - 1)) if n > k else 0.0
    dp = (coef * p_lower - n * t * p) / c
    if k == 0:
        ang = np.ones_like(phi)
        dang = np.zeros_like(phi)
    elif m % 2 == 0:
        ang = math.sqrt(2.0) * np.cos(k * phi)
        dang = -math.sqrt(2.0) * k * np.sin(k * phi)
    else:
        ang = math.sqrt(2.0) * np.sin(k * phi)
        dang = math.sqrt(2.0) * k * np.cos(k * phi)
    return p * ang, p * dang, dp * ang


def real_sph_harm(n: int, m: int, phi, theta):
    return real_sph_harm_derivs(n, m, phi, theta)[0]


def real_sph_harm_surface_grad(n: int, m: int, phi, theta):
    """Y_{n,m} = grad_S y_{n,m} = e_phi (1/cos theta) dy/dphi + e_theta dy/dtheta."""
    _, dphi, dtheta = real_sph_harm_derivs(n, m, phi, theta)
    _, e_phi, e_theta = frame_arrays(phi, theta)
    c = np.cos(np.broadcast_to(np.asarray(theta, float), dphi.shape))
    return e_phi * (dphi / c)[..., None] + e_theta * dtheta[..., None]


def eval_sph_harm(idx: SphHarmIndex, direction: Direction) -> float:
    return float(real_sph_harm(idx.n, idx.m, direction.phi, direction.theta))


def eval_sph_harm_surface_grad(idx: SphHarmIndex, direction: Direction) -> np.ndarray:
    return real_sph_harm_surface_grad(idx.n, idx.m, direction.phi, direction.theta)


def laplace_beltrami_residual(idx: SphHarmIndex, direction: Direction, h: float) -> float:
    """Second-order finite-difference value of (Delta_S + n(n+1)) y_{n,m}.

    Uses Delta_S = (1/cos^2) d2/dphi2 + d2/dtheta2 - tan(theta) d/dtheta.
    """
    phi, theta = direction.phi, direction.theta
    if 0.5 * math.pi - abs(theta) < 2 * h:
        raise PoleProximity(f"latitude {theta} within 2h={2 * h} of a pole")

    def y(p, t):
        return float(real_sph_harm(idx.n, idx.m, p, t))

    y0 = y(phi, theta)
    d2p = (y(phi + h, theta) - 2 * y0 + y(phi - h, theta)) / h**2
    yp, ym = y(phi, theta + h), y(phi, theta - h)
    d2t = (yp - 2 * y0 + ym) / h**2
    d1t = (yp - ym) / (2 * h)
    c = math.cos(theta)
    lap = d2p / c**2 + d2t - math.tan(theta) * d1t
    return lap + eigenvalue(idx.n) * y0


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereQuadrature:
    """Tensor rule: Gauss-Legendre in sin(theta) times uniform azimuth.

    ``phi``, ``theta`` and ``weights`` are flat arrays ordered with azimuth
    varying slowest. ``n_phi`` and ``n_theta`` give the tensor shape.
    """

    phi: np.ndarray
    theta: np.ndarray
    weights: np.ndarray
    exact_degree: int
    n_phi: int
    n_theta: int

    @property
    def nodes(self):
        return [Direction(float(p), float(t)) for p, t in zip(self.phi, self.theta)]

    @property
    def size(self) -> int:
        return self.weights.size

    def points(self) -> np.ndarray:
        return to_cartesian(self.phi, self.theta)


def build_quadrature(n_max: int) -> SphereQuadrature:
    """Rule integrating every spherical polynomial of degree <= 2*n_max + 1 exactly.

    In particular products y_{n,m} y_{n',m'} with n + n' <= 2*n_max.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    n_theta = n_max + 1
    n_phi = 2 * (n_max + 1)
    t, wt = np.polynomial.legendre.leggauss(n_theta)
    theta_1d = np.arcsin(t)
    phi_1d = 2 * np.pi * np.arange(n_phi) / n_phi
    phi, theta = np.meshgrid(phi_1d, theta_1d, indexing="ij")
    w = np.broadcast_to((2 * np.pi / n_phi) * wt, phi.shape)
    return SphereQuadrature(
        phi=phi.ravel(),
        theta=theta.ravel(),
        weights=np.ascontiguousarray(w).ravel(),
        exact_degree=2 * n_max + 1,
        n_phi=n_phi,
        n_theta=n_theta,
    )


def _sample(f, quad):
    if callable(f):
        return np.asarray(f(quad.phi, quad.theta), float)
    return np.asarray(f, float)


def surface_inner_product(f, g, quad: SphereQuadrature) -> float:
    """Quadrature value of the L2(S^2) pairing of ``f`` and ``g``.

    Each argument is either an array sampled at the quadrature nodes, shape
    ``(M,)`` for scalars or ``(M, 3)`` for vectors, or a callable
    ``(phi, theta) -> array`` producing such samples.
    """
    a = _sample(f, quad)
    b = _sample(g, quad)
    if a.ndim != b.ndim:
        raise KindMismatch("cannot pair a scalar field with a vector field")
    if a.ndim == 2:
        prod = np.einsum("ij,ij->i", a, b)
    else:
        prod = a * b
    # plain dot product: fixed order for a given node layout
    return float(np.dot(quad.weights, prod))
