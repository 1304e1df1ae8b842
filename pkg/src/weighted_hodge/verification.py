"""Reusable verification suites shared by the CLI and the test-suite.

Each check yields a :class:`CheckRecord`; nothing here asserts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence

import numpy as np

from . import towers as tw
from .sphere_calculus import build_quadrature, to_cartesian
from .weighted_spaces import ShellSpec, is_integrable, shell_nodes

__all__ = [
    "CheckRecord",
    "random_shell_points",
    "tower_indices",
    "sphere_sup",
    "fd_relative_error",
    "tower_equation_suite",
    "homogeneity_suite",
    "harmonicity_suite",
    "ground_identity_suite",
    "growth_ratios",
    "classify_growth",
    "integrability_suite",
]


@dataclass
class CheckRecord:
    name: str
    anchor: str
    passed: bool
    measured: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "measured": float(self.measured),
            "tolerance": float(self.tolerance),
        }
        if self.detail:
            d["detail"] = self.detail
        return d


def random_shell_points(rng: np.random.Generator, count: int, r_lo=1.1, r_hi=3.0):
    """Uniform directions, radii uniform in [r_lo, r_hi]."""
    v = rng.normal(size=(count, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * rng.uniform(r_lo, r_hi, size=(count, 1))


def tower_indices(n_max: int, k_max: int, signs=(1, -1)):
    """All U, V, P, Z and exceptional indices with floors up to 2*k_max - 1
    (U, V) and powers up to k_max (Z). Floors reach 3 for k_max = 2."""
    out = []
    top = 2 * k_max - 1
    for sign in signs:
        for n in range(n_max + 1):
            for m in range(1, 2 * n + 2):
                out += [tw.TowerIndex("Z", sign, k, n, m) for k in range(k_max + 1)]
                if n == 0:
                    out += [tw.TowerIndex("ExceptionalU", sign, ell, 0, 1)
                            for ell in range(-1, top + 1)]
                    continue
                out += [tw.TowerIndex("U", sign, ell, n, m) for ell in range(-1, top + 1)]
                out += [tw.TowerIndex("V", sign, ell, n, m) for ell in range(-1, top + 1)]
                out.append(tw.TowerIndex("P", sign, 0, n, m))
    return out


_SUP_QUAD = {}


def sphere_sup(idx: tw.TowerIndex) -> float:
    """Max of |field| over a dense node set on the unit sphere."""
    q = _SUP_QUAD.get(idx.n)
    if q is None:
        q = _SUP_QUAD[idx.n] = build_quadrature(2 * idx.n + 8)
    vals = tw.eval_tower_array(idx, q.points())
    if vals.ndim == 2:
        vals = np.linalg.norm(vals, axis=-1)
    return float(np.max(np.abs(vals)))


def _result_kind(idx, op):
    if op == "grad":
        return "vector"
    if op == "div":
        return "scalar"
    return tw.field_kind(idx)


def fd_relative_error(idx: tw.TowerIndex, op: str, x: np.ndarray, h: float) -> float:
    """Worst relative gap between the symbolic result and the FD oracle.

    The gap at a point is scaled by the larger of the analytic value's sup on
    the sphere through the point and the input field's sup divided by r^order,
    so points near nodal lines are not penalised for cancellation.
    """
    term = tw.apply_operator(op, idx)
    analytic = tw.eval_term(term, x, _result_kind(idx, op))
    fd = tw.fd_oracle(lambda p: tw.eval_tower_array(idx, p), op, x, h)
    r = np.linalg.norm(x, axis=-1)
    order = 2 if op == "laplacian" else 1
    scale = sphere_sup(idx) * r ** tw.homogeneity_degree(idx) / r**order
    if term is not None:
        t_idx = term.index
        scale = np.maximum(scale, abs(term.coefficient) * sphere_sup(t_idx)
                           * r ** tw.homogeneity_degree(t_idx))
    gap = np.abs(analytic - fd)
    if gap.ndim == 2:
        gap = np.linalg.norm(gap, axis=-1)
    scale = np.where(scale > 0, scale, 1.0)  # identically zero field: absolute gap
    return float(np.max(gap / scale))


def tower_equation_suite(x, n_max=4, k_max=2, h=1e-3, tol=1e-6, signs=(1, -1)):
    """Compare every type-compatible operator result against the FD oracle."""
    worst, where, count = 0.0, "", 0
    for idx in tower_indices(n_max, k_max, signs):
        ops = ("grad", "laplacian") if tw.field_kind(idx) == "scalar" else ("div", "curl", "laplacian")
        for op in ops:
            err = fd_relative_error(idx, op, x, h)
            count += 1
            if err > worst:
                worst, where = err, f"{op} {idx.label()}"
    return CheckRecord("tower_equations", "tower relations / FD oracle", worst <= tol,
                       worst, tol, {"checks": count, "worst_case": where})


def homogeneity_suite(x, n_max=4, k_max=2, tol=1e-12, signs=(1, -1)):
    worst = 0.0
    for idx in tower_indices(n_max, k_max, signs):
        d = tw.homogeneity_degree(idx)
        f1 = tw.eval_tower_array(idx, x)
        scale = sphere_sup(idx) * np.linalg.norm(x, axis=-1) ** d
        scale = np.where(scale > 0, scale, 1.0)
        if f1.ndim == 2:
            scale = scale[:, None]
        for lam in (2.0, 0.5):
            f2 = tw.eval_tower_array(idx, lam * x)
            worst = max(worst, float(np.max(np.abs(f2 - lam**d * f1) / (lam**d * scale))))
    return CheckRecord("homogeneity", "homogeneous of degree theta", worst <= tol, worst, tol)


def harmonicity_suite(x, n_max=4, h=1e-3, tol=1e-6, signs=(1, -1)):
    worst = 0.0
    for idx in tower_indices(n_max, 1, signs):
        harmonic = (idx.family in ("U", "V", "ExceptionalU") and idx.floor in (-1, 0)) \
            or idx.family == "P" or (idx.family == "Z" and idx.floor == 0)
        if not harmonic:
            continue
        worst = max(worst, fd_relative_error(idx, "laplacian", x, h))
    return CheckRecord("harmonicity", "potential fields: floors -1, 0 and P",
                       worst <= tol, worst, tol)


def ground_identity_suite(x, n_max=4, tol=1e-10, signs=(-1,)):
    """V^{-1} = c U^{-1} with c = ground_constant(sign, n)."""
    worst = 0.0
    for sign in signs:
        for n in range(1, n_max + 1):
            c = tw.ground_constant(sign, n)
            for m in range(1, 2 * n + 2):
                u = tw.eval_tower_array(tw.TowerIndex("U", sign, -1, n, m), x)
                v = tw.eval_tower_array(tw.TowerIndex("V", sign, -1, n, m), x)
                den = np.maximum(np.linalg.norm(v, axis=-1), 1e-300)
                worst = max(worst, float(np.max(np.linalg.norm(v - c * u, axis=-1) / den)))
    return CheckRecord("ground_identity", "V^-1 = (t+1) U^-1", worst <= tol, worst, tol,
                       {"constant_minus_sign": "-n"})


# --------------------------------------------------------------------------
# growth-ratio oracle for integrability
# --------------------------------------------------------------------------

def growth_ratios(idx: tw.TowerIndex, s_values: Sequence[float],
                  R_values: Sequence[float] = (1e2, 1e3, 1e4), radial_nodes=10, n_ang=None):
    """norm over [1, 2R] / norm over [1, R] for each (s, R), by direct quadrature
    of the sampled field (no use of its homogeneity)."""
    R_values = list(R_values)
    bps = tuple(R_values) + tuple(2 * R for R in R_values)
    spec = ShellSpec(1.0, 2 * max(R_values), radial_nodes, breakpoints=bps)
    r, wr, panel, edges = shell_nodes(spec)
    quad = build_quadrature(n_ang if n_ang is not None else idx.n + 2)
    pts = to_cartesian(quad.phi[None, :], quad.theta[None, :], r[:, None])
    vals = tw.eval_tower_array(idx, pts)
    sq = vals**2 if vals.ndim == 2 else np.sum(vals**2, axis=-1)
    ang = sq @ quad.weights
    out = {}
    for s in s_values:
        contrib = wr * (1.0 + r * r) ** s * ang
        per_panel = np.bincount(panel, weights=contrib, minlength=edges.size - 1)
        cum = np.concatenate([[0.0], np.cumsum(per_panel)])
        for R in R_values:
            iR = int(np.argmin(np.abs(edges - R)))
            i2R = int(np.argmin(np.abs(edges - 2 * R)))
            out[(s, R)] = math.sqrt(cum[i2R] / cum[iR])
    return out


def classify_growth(ratios_for_s, band=0.05):
    """True (convergent) if every ratio is within ``band`` of 1, False if all
    exceed it, None if the R values disagree."""
    flags = [abs(v - 1.0) <= band for v in ratios_for_s]
    if all(flags):
        return True
    if not any(flags):
        return False
    return None


def integrability_suite(n_max=3, ells=(-1, 0, 1), s_values=range(-3, 4),
                        R_values=(1e2, 1e3, 1e4), band=0.05):
    """Classifier vs growth oracle over V-bar, U-bar and U-check towers."""
    idxs = []
    for ell in ells:
        idxs.append(tw.TowerIndex("ExceptionalU", -1, ell, 0, 1))
        for n in range(1, n_max + 1):
            for m in range(1, 2 * n + 2):
                idxs.append(tw.TowerIndex("V", -1, ell, n, m))
                idxs.append(tw.TowerIndex("U", -1, ell, n, m))
    s_values = [float(s) for s in s_values]
    total = agree = 0
    mismatches = []
    for idx in idxs:
        ratios = growth_ratios(idx, s_values, R_values)
        for s in s_values:
            oracle = classify_growth([ratios[(s, R)] for R in R_values], band)
            total += 1
            if oracle == is_integrable(idx, s):
                agree += 1
            elif len(mismatches) < 5:
                mismatches.append(f"{idx.label()} s={s}")
    frac = agree / total
    return CheckRecord("integrability_classifier", "membership rule n <= l + s + 1/2",
                       agree == total, frac, 1.0,
                       {"cases": total, "agree": agree, "mismatches": mismatches})


def run_all(checks: Iterable[CheckRecord]) -> List[dict]:
    return [c.as_dict() for c in checks]
