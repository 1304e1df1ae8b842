"""Shell grids, sampled fields and media."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.integrate import trapezoid

from ..errors import GridError, InadmissibleMedium
from ..sphere_calculus import build_quadrature, frame_arrays, to_cartesian

__all__ = ["ShellGrid", "GridField", "Medium"]


@dataclass(frozen=True)
class ShellGrid:
    """Tensor grid on ``r0 <= r <= R`` times the sphere.

    Radial nodes are geometric, ``r_i = r0 q^i`` for ``i = 0..n_r-1`` with
    ``r_{n_r-1} = R``. Angular nodes are those of ``build_quadrature(n_ang)``.
    Node order is (radius, azimuth, latitude) in C order; scalar samples have
    shape ``(size,)`` and vector samples ``(size, 3)`` in the Cartesian frame.
    """

    r0: float
    R: float
    n_r: int
    n_ang: int

    def __post_init__(self):
        if not self.r0 > 0:
            raise GridError("r0 must be positive")
        if self.R < 16 * self.r0 * (1 - 1e-12):
            raise GridError("need R >= 16 r0")
        if self.n_r < 16:
            raise GridError("need at least 16 radial nodes")
        if self.n_ang < 1:
            raise GridError("angular degree must be at least 1")

    # -- 1-d pieces ---------------------------------------------------------
    @cached_property
    def dxi(self) -> float:
        return math.log(self.R / self.r0) / (self.n_r - 1)

    @cached_property
    def r(self) -> np.ndarray:
        r = self.r0 * np.exp(self.dxi * np.arange(self.n_r))
        r[-1] = self.R
        return r

    @cached_property
    def quad(self):
        return build_quadrature(self.n_ang)

    @property
    def n_phi(self) -> int:
        return self.quad.n_phi

    @property
    def n_theta(self) -> int:
        return self.quad.n_theta

    @cached_property
    def phi_1d(self) -> np.ndarray:
        return self.quad.phi.reshape(self.n_phi, self.n_theta)[:, 0].copy()

    @cached_property
    def theta_1d(self) -> np.ndarray:
        return self.quad.theta.reshape(self.n_phi, self.n_theta)[0].copy()

    @property
    def shape(self):
        return (self.n_r, self.n_phi, self.n_theta)

    @property
    def size(self) -> int:
        return self.n_r * self.n_phi * self.n_theta

    @property
    def n_angular(self) -> int:
        return self.n_phi * self.n_theta

    # -- node data ----------------------------------------------------------
    @cached_property
    def node_r(self) -> np.ndarray:
        return np.repeat(self.r, self.n_angular)

    @cached_property
    def node_phi(self) -> np.ndarray:
        return np.tile(self.quad.phi, self.n_r)

    @cached_property
    def node_theta(self) -> np.ndarray:
        return np.tile(self.quad.theta, self.n_r)

    @cached_property
    def points(self) -> np.ndarray:
        return to_cartesian(self.node_phi, self.node_theta, self.node_r)

    @cached_property
    def frames(self):
        return frame_arrays(self.node_phi, self.node_theta)

    @cached_property
    def radial_weights(self) -> np.ndarray:
        """Weights for int f(r) r^2 dr: trapezoid rule in log r.

        Composite Simpson would be more accurate for smooth integrands, but
        its alternating 4/3, 2/3 pattern correlates with odd-even modes of the
        central-difference gradient and pollutes the weak problems.
        """
        w = trapezoid(np.eye(self.n_r), dx=self.dxi, axis=0)
        return w * self.r**3

    @cached_property
    def weights(self) -> np.ndarray:
        """Volume quadrature weight of every node."""
        return np.outer(self.radial_weights, self.quad.weights).ravel()

    def radial_index(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_r), self.n_angular)

    def boundary_mask(self) -> np.ndarray:
        i = self.radial_index()
        return (i == 0) | (i == self.n_r - 1)

    # -- sampling and pairing -----------------------------------------------
    def sample(self, fn: Callable) -> np.ndarray:
        return np.asarray(fn(self.points), float)

    def inner(self, a, b, weight=None) -> float:
        """Quadrature value of int weight * a . b dx."""
        a = _values(a)
        b = _values(b)
        prod = np.einsum("ij,ij->i", a, b) if a.ndim == 2 else a * b
        w = self.weights if weight is None else self.weights * weight
        return float(np.dot(w, prod))

    def norm(self, a, weight=None) -> float:
        return math.sqrt(max(0.0, self.inner(a, a, weight)))

    def header(self) -> dict:
        return {"r0": self.r0, "R": self.R, "n_r": self.n_r, "n_ang": self.n_ang}


@dataclass
class GridField:
    """Samples of a scalar or vector field on a :class:`ShellGrid`."""

    grid: ShellGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, float)
        ok = self.values.shape in ((self.grid.size,), (self.grid.size, 3))
        if not ok:
            raise GridError(f"sample shape {self.values.shape} does not match grid size {self.grid.size}")
        if not np.all(np.isfinite(self.values)):
            raise GridError("field samples must be finite")

    @property
    def kind(self) -> str:
        return "scalar" if self.values.ndim == 1 else "vector"


def _values(a):
    return a.values if isinstance(a, GridField) else np.asarray(a, float)


# --------------------------------------------------------------------------
# media
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Medium:
    """Symmetric positive definite material law eps(x).

    ``kind="identity"``; ``kind="radial"`` with
    ``eps = (1 + c (1 + r^2)^(-tau/2)) Id``; or ``kind="general"`` with
    ``matrix(x) -> (..., 3, 3)`` and a caller-supplied decay rate ``tau``.
    """

    kind: str = "identity"
    c: float = 0.0
    tau: float = math.inf
    matrix_fn: Optional[Callable] = field(default=None, compare=False)
    floor: float = 1e-3

    def __post_init__(self):
        if self.kind not in ("identity", "radial", "general"):
            raise InadmissibleMedium(f"unknown medium kind {self.kind!r}")
        if self.kind == "radial":
            if not self.tau > 0:
                raise InadmissibleMedium("radial medium needs tau > 0")
            if 1.0 + min(self.c, 0.0) < self.floor:
                raise InadmissibleMedium("radial medium is not uniformly positive definite")
        if self.kind == "general" and self.matrix_fn is None:
            raise InadmissibleMedium("general medium needs matrix_fn")

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def radial(cls, c: float, tau: float):
        return cls("radial", c=c, tau=tau)

    @classmethod
    def general(cls, matrix_fn: Callable, tau: float):
        return cls("general", tau=tau, matrix_fn=matrix_fn)

    def describe(self) -> str:
        if self.kind == "radial":
            return f"radial:{self.c:g},{self.tau:g}"
        return self.kind

    @property
    def is_scalar(self) -> bool:
        return self.kind != "general"

    def scalar(self, r) -> np.ndarray:
        """Scalar factor for identity/radial media."""
        r = np.asarray(r, float)
        if self.kind == "identity":
            return np.ones_like(r)
        if self.kind == "radial":
            return 1.0 + self.c * (1.0 + r * r) ** (-0.5 * self.tau)
        raise InadmissibleMedium("general medium has no scalar factor")

    def matrices(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        if self.kind == "general":
            M = np.asarray(self.matrix_fn(x), float)
            if not np.allclose(M, np.swapaxes(M, -1, -2), rtol=1e-12, atol=1e-14):
                raise InadmissibleMedium("medium matrix is not symmetric")
            if np.min(np.linalg.eigvalsh(M)) < self.floor:
                raise InadmissibleMedium("medium matrix is not uniformly positive definite")
            return M
        e = self.scalar(np.linalg.norm(x, axis=-1))
        return e[..., None, None] * np.eye(3)

    def apply(self, x, v) -> np.ndarray:
        v = np.asarray(v, float)
        if self.is_scalar:
            return self.scalar(np.linalg.norm(np.asarray(x, float), axis=-1))[..., None] * v
        return np.einsum("...ij,...j->...i", self.matrices(x), v)

    def apply_inverse(self, x, v) -> np.ndarray:
        v = np.asarray(v, float)
        if self.is_scalar:
            return v / self.scalar(np.linalg.norm(np.asarray(x, float), axis=-1))[..., None]
        return np.linalg.solve(self.matrices(x), v[..., None])[..., 0]
