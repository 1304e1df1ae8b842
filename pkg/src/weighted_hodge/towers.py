"""Delta-towers, div-grad towers U, curl-curl towers V and potential fields P.

Every field here is built on one real spherical harmonic ``y = y_{n,m}`` and
its surface gradient ``Y``. With ``t`` the base degree (``n`` for the growing
sign, ``-n-1`` for the decaying sign) and ``p = t + 2k``:

    z^k        = xi^k r^p y
    U^{2k}     = z^k
    U^{2k-1}   = grad z^k        = xi^k r^(p-1) [p y e_r + Y]
    V^{2k}     = xi^k r^p e_r x Y = -curl(z^k x)
    V^{2k-1}   = -curl V^{2k}    = xi^k r^(p-1) [(p+1) Y + n(n+1) y e_r]

The odd V floor follows from ``curl curl = grad div - Delta`` applied to
``z^k x``; the ``n(n+1)`` factor is ``(p+1) p - xi^(k-1)/xi^k``.

Ground floor. Because ``t (t+1) = n(n+1)`` the two ground members differ by a
constant factor::

    V^{-1} = (t + 1) U^{-1}        (t + 1 = -n for the decaying sign)

so they coincide only up to that factor. ``ground_constant`` returns it.

Potential field. We use ``P = U^1 - V^1 / (t + 1) = (x z^0 - 2 grad z^1)/(t + 1)``.
With this scaling ``Delta P = 0``, ``div P = U^0`` and
``curl P = -V^0 / (t + 1)``. The unscaled difference ``U^1 - V^1`` is not
harmonic; its Laplacian is ``-t U^{-1}``.

The exceptional family lives on the order-0 harmonic with the constant
``y_{0,1}`` dropped: ``U^{2k} = xi^k r^(2k-d)`` and
``U^{2k-1} = xi^k (2k-d) r^(2k-1-d) e_r`` with ``d = 1`` for the decaying sign
and ``d = 0`` for the growing one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import InvalidIndex, KindMismatch, OriginProximity, OriginSingular
from .sphere_calculus import (
    eigenvalue,
    frame_arrays,
    real_sph_harm,
    real_sph_harm_surface_grad,
    to_polar,
)

__all__ = [
    "FAMILIES",
    "OPERATORS",
    "TowerIndex",
    "TowerValue",
    "Term",
    "base_degree",
    "homogeneity_degree",
    "xi_coeff",
    "xi_coeff_exact",
    "ground_constant",
    "field_kind",
    "eval_tower",
    "eval_tower_array",
    "eval_exceptional",
    "apply_operator",
    "eval_term",
    "fd_oracle",
]

FAMILIES = ("U", "V", "P", "Z", "ExceptionalU")
OPERATORS = ("grad", "curl", "div", "laplacian")


def _sign(sign) -> int:
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise InvalidIndex(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class TowerIndex:
    """One tower field.

    ``floor`` is the floor ell for U, V and ExceptionalU, the power k for Z,
    and is ignored (kept at 0) for P.
    """

    family: str
    sign: int
    floor: int
    n: int
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sign", _sign(self.sign))
        fam = self.family
        if fam not in FAMILIES:
            raise InvalidIndex(f"unknown family {fam!r}")
        if self.n < 0 or not 1 <= self.m <= 2 * self.n + 1:
            raise InvalidIndex(f"bad harmonic index (n={self.n}, m={self.m})")
        if fam in ("V", "P") and self.n < 1:
            raise InvalidIndex(f"{fam} towers need n >= 1; order 0 is the exceptional family")
        if fam == "ExceptionalU" and (self.n, self.m) != (0, 1):
            raise InvalidIndex("the exceptional family lives on (n, m) = (0, 1)")
        if fam == "Z" and self.floor < 0:
            raise InvalidIndex("Z towers need k >= 0")
        if fam in ("U", "V", "ExceptionalU") and self.floor < -1:
            raise InvalidIndex("floors start at -1")
        if fam == "P" and self.floor != 0:
            object.__setattr__(self, "floor", 0)

    def label(self) -> str:
        s = "+" if self.sign > 0 else "-"
        if self.family == "P":
            return f"P[{s},n={self.n},m={self.m}]"
        tag = "k" if self.family == "Z" else "l"
        return f"{self.family}[{s},{tag}={self.floor},n={self.n},m={self.m}]"

    def with_floor(self, floor: int) -> "TowerIndex":
        return TowerIndex(self.family, self.sign, floor, self.n, self.m)


@dataclass(frozen=True)
class TowerValue:
    kind: str  # "scalar" or "vector"
    value: object


@dataclass(frozen=True)
class Term:
    """``coefficient * field(index)``; operator results that vanish are ``None``."""

    coefficient: float
    index: TowerIndex


def base_degree(sign, n: int) -> int:
    return n if _sign(sign) > 0 else -n - 1


def field_kind(idx: TowerIndex) -> str:
    if idx.family == "Z":
        return "scalar"
    if idx.family == "P":
        return "vector"
    if idx.family in ("U", "ExceptionalU"):
        return "scalar" if idx.floor % 2 == 0 else "vector"
    return "vector"


def homogeneity_degree(idx: TowerIndex) -> int:
    if idx.family == "ExceptionalU":
        return idx.floor - (1 if idx.sign < 0 else 0)
    t = base_degree(idx.sign, idx.n)
    if idx.family == "Z":
        return t + 2 * idx.floor
    if idx.family == "P":
        return t + 1
    return t + idx.floor


# --------------------------------------------------------------------------
# xi coefficients
# --------------------------------------------------------------------------

def _log_abs_gamma_and_sign(x: float):
    if x > 0:
        return math.lgamma(x), 1
    # negative half-integers only reach here; Gamma alternates sign per unit interval
    sgn = -1 if math.floor(-x) % 2 == 0 else 1
    return math.lgamma(x), sgn


def xi_coeff(sign, n: int, k: int) -> float:
    """xi^k = Gamma(a) / (4^k k! Gamma(k + a)), a = 1 +/- (n + 1/2)."""
    if n < 0 or k < 0:
        raise InvalidIndex("xi needs n >= 0 and k >= 0")
    if k == 0:
        return 1.0
    a = 1.0 + _sign(sign) * (n + 0.5)
    la, sa = _log_abs_gamma_and_sign(a)
    lb, sb = _log_abs_gamma_and_sign(k + a)
    log_val = la - lb - k * math.log(4.0) - math.lgamma(k + 1)
    return sa * sb * math.exp(log_val)


def xi_coeff_exact(sign, n: int, k: int) -> Fraction:
    """Same coefficient as an exact rational, via the Pochhammer product."""
    a = 1 + _sign(sign) * (n + Fraction(1, 2))
    den = Fraction(1)
    for j in range(k):
        den *= 4 * (j + 1) * (a + j)
    return 1 / den


def ground_constant(sign, n: int) -> int:
    """The factor c in V^{-1} = c * U^{-1}; equals t + 1."""
    return base_degree(sign, n) + 1


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def _polar_data(x, n, m):
    x = np.asarray(x, float)
    r, phi, theta = to_polar(x)
    if np.any(r == 0):
        raise OriginSingular("tower fields are singular at the origin")
    e_r, _, _ = frame_arrays(phi, theta)
    y = real_sph_harm(n, m, phi, theta)
    Y = real_sph_harm_surface_grad(n, m, phi, theta)
    return r, e_r, y, Y


def _exceptional_array(sign, floor, x):
    x = np.asarray(x, float)
    r = np.linalg.norm(x, axis=-1)
    if np.any(r == 0):
        raise OriginSingular("tower fields are singular at the origin")
    d = 1 if sign < 0 else 0
    if floor % 2 == 0:
        k = floor // 2
        return xi_coeff(sign, 0, k) * r ** (2 * k - d)
    k = (floor + 1) // 2
    c = xi_coeff(sign, 0, k) * (2 * k - d)
    return (c * r ** (2 * k - 1 - d))[..., None] * (x / r[..., None])


def eval_tower_array(idx: TowerIndex, x) -> np.ndarray:
    """Vectorized evaluation at points ``x`` of shape ``(..., 3)``."""
    if idx.family == "ExceptionalU":
        return _exceptional_array(idx.sign, idx.floor, x)
    n = idx.n
    t = base_degree(idx.sign, n)
    r, e_r, y, Y = _polar_data(x, n, idx.m)
    fam, ell = idx.family, idx.floor
    if fam == "Z" or (fam == "U" and ell % 2 == 0):
        k = ell if fam == "Z" else ell // 2
        return xi_coeff(idx.sign, n, k) * r ** (t + 2 * k) * y
    if fam == "U":
        k = (ell + 1) // 2
        p = t + 2 * k
        c = xi_coeff(idx.sign, n, k) * r ** (p - 1)
        return c[..., None] * (p * y[..., None] * e_r + Y)
    if fam == "V":
        if ell % 2 == 0:
            k = ell // 2
            c = xi_coeff(idx.sign, n, k) * r ** (t + 2 * k)
            return c[..., None] * np.cross(e_r, Y)
        k = (ell + 1) // 2
        p = t + 2 * k
        c = xi_coeff(idx.sign, n, k) * r ** (p - 1)
        return c[..., None] * ((p + 1) * Y + eigenvalue(n) * y[..., None] * e_r)
    # P
    xi1 = xi_coeff(idx.sign, n, 1)
    c = r ** (t + 1) / (t + 1)
    radial = (1.0 - 2.0 * xi1 * (t + 2)) * y
    return c[..., None] * (radial[..., None] * e_r - 2.0 * xi1 * Y)


def eval_tower(idx: TowerIndex, point) -> TowerValue:
    point = np.asarray(point, float)
    if np.linalg.norm(point) == 0:
        raise OriginSingular("tower fields are singular at the origin")
    val = eval_tower_array(idx, point)
    kind = field_kind(idx)
    return TowerValue(kind, float(val) if kind == "scalar" else np.asarray(val))


def eval_exceptional(sign, floor: int, point) -> TowerValue:
    return eval_tower(TowerIndex("ExceptionalU", sign, floor, 0, 1), point)


# --------------------------------------------------------------------------
# symbolic operator algebra
# --------------------------------------------------------------------------

def _is_zero_field(idx: TowerIndex) -> bool:
    # U^{-1} on the growing order-0 harmonic is the gradient of a constant
    return idx.family in ("U", "ExceptionalU") and idx.sign > 0 and idx.n == 0 and idx.floor == -1


def _term(coef, idx):
    if _is_zero_field(idx):
        return None
    return Term(float(coef), idx)


def apply_operator(op: str, idx: TowerIndex) -> Optional[Term]:
    """Apply grad, curl, div or laplacian symbolically.

    Returns a :class:`Term` or ``None`` when the result is the zero field.
    """
    if op not in OPERATORS:
        raise ValueError(f"unknown operator {op!r}")
    kind = field_kind(idx)
    if kind == "scalar" and op in ("curl", "div"):
        raise KindMismatch(f"{op} of scalar field {idx.label()}")
    if kind == "vector" and op == "grad":
        raise KindMismatch(f"grad of vector field {idx.label()}")
    fam, ell = idx.family, idx.floor

    if fam == "Z":
        if op == "grad":
            return _term(1.0, TowerIndex("U", idx.sign, 2 * ell - 1, idx.n, idx.m))
        return None if ell == 0 else Term(1.0, idx.with_floor(ell - 1))

    if fam == "P":
        if op == "div":
            return _term(1.0, TowerIndex("U", idx.sign, 0, idx.n, idx.m))
        if op == "curl":
            c = -1.0 / ground_constant(idx.sign, idx.n)
            return Term(c, TowerIndex("V", idx.sign, 0, idx.n, idx.m))
        return None

    if fam in ("U", "ExceptionalU"):
        if ell % 2 == 0:
            if op == "grad":
                return _term(1.0, idx.with_floor(ell - 1))
            return None if ell == 0 else _term(1.0, idx.with_floor(ell - 2))
        if op == "curl":
            return None
        if op == "div":
            return None if ell == -1 else _term(1.0, idx.with_floor(ell - 1))
        return None if ell == -1 else _term(1.0, idx.with_floor(ell - 2))

    # V
    if op == "div":
        return None
    if op == "laplacian":
        return None if ell in (-1, 0) else Term(1.0, idx.with_floor(ell - 2))
    if ell % 2 == 0:
        return Term(-1.0, idx.with_floor(ell - 1))
    return None if ell == -1 else Term(1.0, idx.with_floor(ell - 1))


def eval_term(term: Optional[Term], x, kind: str):
    """Evaluate a symbolic operator result; ``None`` evaluates to zeros of ``kind``."""
    x = np.asarray(x, float)
    if term is None:
        shape = x.shape[:-1] if kind == "scalar" else x.shape
        return np.zeros(shape)
    return term.coefficient * eval_tower_array(term.index, x)


# --------------------------------------------------------------------------
# finite-difference oracle
# --------------------------------------------------------------------------

_D1 = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
_D2 = ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12))


def _partials(field, x, h, stencil, order):
    """Array ``J[..., a]`` (scalar) or ``J[..., i, a]`` (vector) of d/dx_a."""
    cols = []
    for a in range(3):
        acc = 0.0
        for off, w in stencil:
            shift = np.zeros(3)
            shift[a] = off * h
            acc = acc + w * np.asarray(field(x + shift), float)
        cols.append(acc / h**order)
    return np.stack(cols, axis=-1)


def fd_oracle(field: Callable, op: str, point, h: float):
    """Fourth-order central-difference grad, curl, div or Laplacian.

    ``field`` maps points ``(..., 3)`` to scalars ``(...)`` or vectors
    ``(..., 3)``; ``point`` may be a single point or an array of points.
    """
    x = np.asarray(point, float)
    if np.any(np.linalg.norm(x, axis=-1) <= 4 * h):
        raise OriginProximity("stencil would reach within 4h of the origin")
    sample = np.asarray(field(x), float)
    is_vec = sample.shape == x.shape
    if op == "grad":
        if is_vec:
            raise KindMismatch("grad of a vector field")
        return _partials(field, x, h, _D1, 1)
    if op == "laplacian":
        return _partials(field, x, h, _D2, 2).sum(axis=-1)
    if not is_vec:
        raise KindMismatch(f"{op} of a scalar field")
    J = _partials(field, x, h, _D1, 1)
    if op == "div":
        return J[..., 0, 0] + J[..., 1, 1] + J[..., 2, 2]
    if op == "curl":
        return np.stack([J[..., 2, 1] - J[..., 1, 2],
                         J[..., 0, 2] - J[..., 2, 0],
                         J[..., 1, 0] - J[..., 0, 1]], axis=-1)
    raise ValueError(f"unknown operator {op!r}")
