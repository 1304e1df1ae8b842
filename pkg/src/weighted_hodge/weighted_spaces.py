"""Polynomial weights, weighted norms on shells, integrability of towers and
the finite-dimensional spaces built from them.

The weight is ``rho = (1 + r^2)^(1/2)`` and ``L2_s`` collects fields ``F``
with ``rho^s F`` square integrable. Weights in the excluded set

    {n + 1/2 : n >= 0}  U  {-n - 3/2 : n >= 0}

are rejected everywhere (closer than ``WEIGHT_GUARD``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

import numpy as np

from .errors import InvalidWeight, NonIntegralResult, PositiveSignUnsupported
from .sphere_calculus import SphereQuadrature, to_cartesian
from .towers import TowerIndex, homogeneity_degree

__all__ = [
    "WEIGHT_GUARD",
    "BASIS_FAMILIES",
    "WeightContext",
    "ShellSpec",
    "SpaceBasisSpec",
    "excluded_distance",
    "is_valid_weight",
    "require_valid_weight",
    "weight_value",
    "shell_nodes",
    "weighted_shell_norm",
    "is_integrable",
    "integrability_threshold",
    "mu",
    "dirichlet_dim",
    "enumerate_basis",
    "check_admissibility",
]

WEIGHT_GUARD = 1e-9
BASIS_FAMILIES = ("Vbar", "Ubar", "Pbar", "Ucheck")


def excluded_distance(s: float) -> float:
    """Distance from ``s`` to the excluded weight set."""
    h = math.floor(s) + 0.5  # nearest half-integers are h and h -/+ 1
    cands = [c for c in (h - 1.0, h, h + 1.0) if c != -0.5]
    return min(abs(s - c) for c in cands)


def is_valid_weight(s: float) -> bool:
    return math.isfinite(s) and excluded_distance(s) > WEIGHT_GUARD


def require_valid_weight(s: float) -> float:
    if not is_valid_weight(s):
        raise InvalidWeight(f"weight s={s} lies in (or too close to) the excluded set")
    return float(s)


@dataclass(frozen=True)
class WeightContext:
    s: float
    N: int = 3

    @property
    def valid(self) -> bool:
        return is_valid_weight(self.s)

    def weight(self, x) -> np.ndarray:
        return weight_value(x, self.s)


def weight_value(point, s: float):
    """(1 + |x|^2)^(s/2)."""
    x = np.asarray(point, float)
    r2 = np.sum(x * x, axis=-1)
    return (1.0 + r2) ** (0.5 * s)


# --------------------------------------------------------------------------
# shell quadrature
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ShellSpec:
    """Truncated shell ``r_in <= |x| <= r_out``.

    ``rule = "gl-log"`` splits [log r_in, log r_out] into panels of width at
    most log 2 (plus any ``breakpoints``) and places ``radial_nodes``
    Gauss-Legendre nodes in each.
    """

    r_in: float
    r_out: float
    radial_nodes: int = 12
    rule: str = "gl-log"
    breakpoints: tuple = ()

    def __post_init__(self):
        if not 0 < self.r_in < self.r_out:
            raise ValueError("need 0 < r_in < r_out")
        if self.rule != "gl-log":
            raise ValueError(f"unknown radial rule {self.rule!r}")


def _panel_edges(spec: ShellSpec) -> np.ndarray:
    a, b = math.log(spec.r_in), math.log(spec.r_out)
    n_oct = max(1, math.ceil((b - a) / math.log(2.0) - 1e-12))
    edges = set(np.linspace(a, b, n_oct + 1).tolist())
    for bp in spec.breakpoints:
        lb = math.log(bp)
        if a < lb < b:
            edges.add(lb)
    return np.array(sorted(edges))


def shell_nodes(spec: ShellSpec):
    """Radial nodes and weights for ``int f(r) r^2 dr`` plus panel membership."""
    t, w = np.polynomial.legendre.leggauss(spec.radial_nodes)
    edges = _panel_edges(spec)
    rs, ws, panel = [], [], []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        xi = 0.5 * (hi - lo) * t + 0.5 * (hi + lo)
        r = np.exp(xi)
        rs.append(r)
        ws.append(0.5 * (hi - lo) * w * r**3)  # dr = r dxi, volume r^2
        panel.append(np.full(r.size, i))
    return np.concatenate(rs), np.concatenate(ws), np.concatenate(panel), np.exp(edges)


def weighted_shell_norm(field: Callable, s: float, shell: ShellSpec,
                        quad: SphereQuadrature) -> float:
    """(int_shell rho^(2s) |F|^2 dx)^(1/2) by log-panel Gauss-Legendre x ``quad``."""
    r, wr, _, _ = shell_nodes(shell)
    pts = to_cartesian(quad.phi[None, :], quad.theta[None, :], r[:, None])
    vals = np.asarray(field(pts), float)
    sq = vals**2 if vals.ndim == 2 else np.sum(vals**2, axis=-1)
    ang = sq @ quad.weights
    rad = wr * (1.0 + r * r) ** s
    return float(math.sqrt(max(0.0, float(np.dot(rad, ang)))))


# --------------------------------------------------------------------------
# integrability
# --------------------------------------------------------------------------

def integrability_threshold(idx: TowerIndex) -> float:
    """Supremum of weights ``s`` with the tower in L2_s outside the unit ball.

    A field homogeneous of degree d has ``rho^(2s) |F|^2 r^2 ~ r^(2s + 2d + 2)``
    at infinity, integrable iff ``s < -d - 3/2``. For U and V of floor l and
    order n this is ``n - l - 1/2``.
    """
    return -homogeneity_degree(idx) - 1.5


def is_integrable(idx: TowerIndex, s: float) -> bool:
    if idx.sign > 0:
        raise PositiveSignUnsupported("growing towers are not classified")
    require_valid_weight(s)
    return s < integrability_threshold(idx)


# --------------------------------------------------------------------------
# dimension formulas
# --------------------------------------------------------------------------

def mu(sigma: int, q: int, N: int = 3) -> int:
    """mu_sigma^q = C(N,q) C(N-1+sigma, sigma) q q' (N+2 sigma) / (N (q+sigma)(q'+sigma)),
    with q' = N - q, evaluated exactly."""
    if not (0 <= q <= N and sigma >= 0):
        raise ValueError(f"need 0 <= q <= N and sigma >= 0, got q={q}, N={N}, sigma={sigma}")
    qq = N - q
    if (q + sigma) * (qq + sigma) == 0:
        return 1  # q in {0, N}, sigma = 0
    val = (Fraction(math.comb(N, q) * math.comb(N - 1 + sigma, sigma) * q * qq * (N + 2 * sigma))
           / (N * (q + sigma) * (qq + sigma)))
    if val.denominator != 1:
        raise NonIntegralResult(f"mu({sigma}, {q}, {N}) = {val} is not an integer")
    return int(val)


def dirichlet_dim(s: float, q: int, d_q: int, N: int = 3) -> int:
    """d + sum over 0 <= sigma < -s - N/2 of mu_sigma^q.

    For ``-N/2 < s < N/2 - 1`` the sum is empty and the value is ``d_q``.
    Above ``N/2 - 1`` the classical Dirichlet fields (degree ``1 - N``) leave
    L2_s and the count no longer applies, so those weights are rejected.
    """
    require_valid_weight(s)
    if s > 0.5 * N - 1:
        raise InvalidWeight(f"dimension count is stated for s < {0.5 * N - 1}")
    total = d_q
    sigma = 0
    while sigma < -s - 0.5 * N:
        total += mu(sigma, q, N)
        sigma += 1
    return total


# --------------------------------------------------------------------------
# finite-dimensional spaces
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceBasisSpec:
    """``family`` is one of Vbar, Ubar (floor ``ell``), Pbar, Ucheck (floor ``ell``)."""

    family: str
    s: float
    ell: int = 0

    def __post_init__(self):
        if self.family not in BASIS_FAMILIES:
            raise ValueError(f"unknown space family {self.family!r}")


def enumerate_basis(spec: SpaceBasisSpec) -> List[TowerIndex]:
    s = require_valid_weight(spec.s)
    out = []
    if spec.family == "Ucheck":
        if 0 <= spec.ell + s + 0.5:
            out.append(TowerIndex("ExceptionalU", -1, spec.ell, 0, 1))
        return out
    if spec.family == "Pbar":
        n_max = math.floor(s + 1.5)
        fam, floor = "P", 0
    else:
        n_max = math.floor(spec.ell + s + 0.5)
        fam, floor = ("V" if spec.family == "Vbar" else "U"), spec.ell
    for n in range(1, n_max + 1):
        for m in range(1, 2 * n + 2):
            out.append(TowerIndex(fam, -1, floor, n, m))
    return out


def check_admissibility(tau: float, s: float, role: str = "epsilon", N: int = 3) -> bool:
    """Decay-rate conditions on a medium perturbation.

    ``role="epsilon"``: tau > max(0, s + 1 - N/2) and tau >= -s - 1.
    ``role="mu"`` (also used for nu): tau > max(0, s - N/2) and tau >= -s.
    """
    if role == "epsilon":
        return tau > max(0.0, s + 1 - 0.5 * N) and tau >= -s - 1
    if role in ("mu", "nu"):
        return tau > max(0.0, s - 0.5 * N) and tau >= -s
    raise ValueError(f"unknown role {role!r}")
