"""Command-line front end.

    weighted-hodge verify-towers [--n-max 4 --k-max 2 --points 20 --seed 7]
    weighted-hodge dims [--s-list ... --q-list ... --d-presets ball]
    weighted-hodge integrability [--s-range -3:3 --R-list 1e2,1e3,1e4]
    weighted-hodge decompose (--builtin NAME | --input FILE) [--s --medium --grid --correction]
    weighted-hodge report-all

Every command writes a JSON report (stdout, or ``--out``) and exits with 0
when all checks pass, 1 on a failed check or solver breakdown, and 2 on a
usage or input error. Reports contain no timings, so a fixed seed and
configuration give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from . import towers as tw
from . import verification as vf
from .errors import (
    EmptyBasis,
    FieldFileError,
    GridError,
    InadmissibleMedium,
    InvalidIndex,
    InvalidWeight,
    SingularGram,
    SolverDiverged,
)
from .helmholtz import (
    Medium,
    ShellGrid,
    decompose_with_correction,
    read_grid_field,
    weighted_decompose,
    write_grid_field,
)
from .helmholtz import manufactured as mf
from .helmholtz.correction import flux_pairing
from .helmholtz.operators import CutoffSpec, make_cutoff
from .verification import CheckRecord
from .weighted_spaces import (
    SpaceBasisSpec,
    dirichlet_dim,
    enumerate_basis,
    is_integrable,
    mu,
)

# Check names mapped to the mathematical statement each one exercises.
ANCHORS = {
    "tower_equations": "tower relations: grad/div/curl/Laplacian ladders",
    "homogeneity": "homogeneity degrees of tower fields",
    "harmonicity": "potential fields are harmonic",
    "ground_identity": "ground floor: V^-1 = (t+1) U^-1",
    "laplace_of_half_r": "exceptional tower: Laplacian of r/2 is 1/r",
    "mu_binomial": "mu_0^q equals C(N,q)",
    "mu_three_dim": "mu_sigma^1 = mu_sigma^2 = 2 sigma + 3 in 3-D",
    "mu_integral": "mu_sigma^q is an integer",
    "dirichlet_dim_steps": "Dirichlet dimension step function",
    "dirichlet_dim_table": "Dirichlet dimension count d_s^q",
    "basis_sizes": "finite tower spaces match mu counts",
    "integrability_classifier": "L2_s membership of decaying towers: s < n - l - 1/2",
    "integrability_examples": "L2_s membership of decaying towers: s < n - l - 1/2",
    "reconstruction": "decomposition reconstructs its input",
    "orthogonality": "weighted orthogonality of the two parts",
    "weak_divergence": "weak weighted divergence of the solenoidal part",
    "dirichlet_solenoidal": "Dirichlet field is weighted-solenoidal",
    "grad_recovery": "manufactured gradient part recovered",
    "sol_recovery": "manufactured solenoidal part recovered",
    "coefficient_recovery": "correction coefficients by duality pairing",
    "correction_dimension": "correction space dimension equals mu count",
    "flux_pairing": "flux of grad(eta/r) is -4 pi",
}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------

def _floats(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_grid(text: str) -> ShellGrid:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--grid expects r0,R,n_r,n_ang")
    try:
        return ShellGrid(float(parts[0]), float(parts[1]), int(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise UsageError(f"bad --grid: {exc}") from None


def parse_medium(text: str) -> Medium:
    if text == "identity":
        return Medium.identity()
    if text.startswith("radial:"):
        vals = _floats(text[len("radial:"):])
        if len(vals) != 2:
            raise UsageError("--medium radial:c,tau needs two numbers")
        return Medium.radial(vals[0], vals[1])
    raise UsageError(f"unknown medium {text!r}")


def parse_s_range(text: str) -> List[float]:
    if ":" in text:
        a, b = text.split(":", 1)
        try:
            lo, hi = int(a), int(b)
        except ValueError:
            raise UsageError("--s-range lo:hi takes integers") from None
        return [float(s) for s in range(lo, hi + 1)]
    return _floats(text)


D_PRESETS = {"ball": {0: 0, 1: 1, 2: 0, 3: 0}}


def parse_presets(text: str):
    if text in D_PRESETS:
        return D_PRESETS[text]
    out = {}
    for item in text.split(","):
        if ":" not in item:
            raise UsageError("--d-presets takes 'ball' or q:d pairs like 1:1,2:0")
        q, d = item.split(":", 1)
        try:
            out[int(q)] = int(d)
        except ValueError:
            raise UsageError("--d-presets values must be integers") from None
    return out


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _rec(name, passed, measured, tol, detail=None):
    return CheckRecord(name, ANCHORS[name], bool(passed), float(measured), float(tol), detail or {})


def run_verify_towers(args) -> List[CheckRecord]:
    if not 0 <= args.n_max <= 8:
        raise UsageError("--n-max must lie in 0..8")
    if args.k_max < 0 or args.k_max > 3:
        raise UsageError("--k-max must lie in 0..3")
    if args.points < 1:
        raise UsageError("--points must be positive")
    rng = np.random.default_rng(args.seed)
    x = vf.random_shell_points(rng, args.points)
    tol = args.tol if args.tol is not None else 1e-6
    checks = [
        vf.tower_equation_suite(x, args.n_max, max(args.k_max, 1), args.h, tol),
        vf.homogeneity_suite(x, args.n_max, max(args.k_max, 1)),
        vf.harmonicity_suite(x, args.n_max, args.h, tol),
    ]
    if args.n_max >= 1:
        checks.append(vf.ground_identity_suite(x[:10], args.n_max))
    z1 = tw.TowerIndex("ExceptionalU", -1, 2, 0, 1)  # r/2
    p = x[:1] / np.linalg.norm(x[:1]) * 2.0
    lap = tw.fd_oracle(lambda q: tw.eval_tower_array(z1, q), "laplacian", p, 1e-2)
    err = float(abs(lap[0] - 0.5) / 0.5)
    checks.append(_rec("laplace_of_half_r", err <= 1e-7, err, 1e-7))
    for c in checks:
        c.anchor = ANCHORS[c.name]
    return checks


def run_dims(args) -> List[CheckRecord]:
    s_list = _floats(args.s_list)
    q_list = _ints(args.q_list)
    presets = parse_presets(args.d_presets)
    for q in q_list:
        if q not in presets:
            raise UsageError(f"no Betti preset for q={q}")
    checks = []
    binom = all(mu(0, q, 3) == math.comb(3, q) for q in range(4))
    checks.append(_rec("mu_binomial", binom, float(binom), 0.0))
    worst = max(abs(mu(s, 1) - (2 * s + 3)) + abs(mu(s, 2) - (2 * s + 3)) for s in range(11))
    checks.append(_rec("mu_three_dim", worst == 0, worst, 0.0))
    n_ok = 0
    for N in range(1, 7):
        for q in range(N + 1):
            for sig in range(13):
                n_ok += isinstance(mu(sig, q, N), int)
    checks.append(_rec("mu_integral", n_ok == sum(N + 1 for N in range(1, 7)) * 13, n_ok, 0.0))

    grid = np.round(np.arange(-8.0, 0.5, 0.05), 10)
    grid = [s for s in grid if abs((s % 1.0) - 0.5) > 1e-6]
    vals = [dirichlet_dim(s, 1, 1) for s in grid]
    monotone = all(a >= b for a, b in zip(vals, vals[1:]))
    jumps_ok = all(
        a == b or any(lo < -1.5 - k < hi for k in range(10))
        for (lo, a), (hi, b) in zip(zip(grid, vals), zip(grid[1:], vals[1:]))
    )
    checks.append(_rec("dirichlet_dim_steps", monotone and jumps_ok, float(monotone and jumps_ok), 0.0))

    table = []
    for s in s_list:
        for q in q_list:
            try:
                table.append({"s": s, "q": q, "d": presets[q], "dim": dirichlet_dim(s, q, presets[q])})
            except InvalidWeight as exc:
                raise UsageError(str(exc)) from None
    checks.append(_rec("dirichlet_dim_table", True, len(table), 0.0, {"rows": table}))

    sizes = []
    ok = True
    for s in (2.0, 3.0, 4.0, 5.0):
        n_basis = len(enumerate_basis(SpaceBasisSpec("Pbar", s - 2)))
        expect = sum(mu(sig, 1) for sig in range(10) if sig < s - 1.5)
        ok &= n_basis == expect
        sizes.append({"s": s, "Pbar_s_minus_2": n_basis, "mu_sum": expect})
    checks.append(_rec("basis_sizes", ok, float(ok), 0.0, {"rows": sizes}))
    return checks


def run_integrability(args) -> List[CheckRecord]:
    s_values = parse_s_range(args.s_range)
    R_values = _floats(args.R_list)
    for s in s_values:
        try:
            from .weighted_spaces import require_valid_weight
            require_valid_weight(s)
        except InvalidWeight as exc:
            raise UsageError(str(exc)) from None
    fams = [f.strip() for f in args.families.split(",")]
    for f in fams:
        if f not in ("V", "U", "Ucheck"):
            raise UsageError(f"unknown family {f!r}; choose from V,U,Ucheck")
    rec = _integrability_filtered(fams, args.n_max, s_values, R_values)
    examples = [
        (tw.TowerIndex("V", -1, -1, 1, 1), 1.0, True),
        (tw.TowerIndex("V", -1, 0, 1, 1), 1.0, False),
        (tw.TowerIndex("ExceptionalU", -1, 0, 0, 1), 0.0, False),
    ]
    rows = []
    ok = True
    for idx, s, expect in examples:
        ratios = vf.growth_ratios(idx, [s], R_values)
        oracle = vf.classify_growth([ratios[(s, R)] for R in R_values])
        got = is_integrable(idx, s)
        ok &= got == expect == oracle
        rows.append({"field": idx.label(), "s": s, "classifier": got, "oracle": oracle})
    return [rec, _rec("integrability_examples", ok, float(ok), 0.0, {"rows": rows})]


def _integrability_filtered(fams, n_max, s_values, R_values):
    idxs = []
    for ell in (-1, 0, 1):
        if "Ucheck" in fams:
            idxs.append(tw.TowerIndex("ExceptionalU", -1, ell, 0, 1))
        for n in range(1, n_max + 1):
            for m in range(1, 2 * n + 2):
                for fam in ("V", "U"):
                    if fam in fams:
                        idxs.append(tw.TowerIndex(fam, -1, ell, n, m))
    total = agree = 0
    bad = []
    for idx in idxs:
        ratios = vf.growth_ratios(idx, s_values, R_values)
        for s in s_values:
            oracle = vf.classify_growth([ratios[(s, R)] for R in R_values])
            total += 1
            if oracle == is_integrable(idx, s):
                agree += 1
            elif len(bad) < 5:
                bad.append(f"{idx.label()} s={s}")
    frac = agree / total if total else 1.0
    return _rec("integrability_classifier", agree == total, frac, 1.0,
                {"cases": total, "agree": agree, "mismatches": bad})


def _rel(grid, a, b, ref):
    return grid.norm(a - b) / max(grid.norm(ref), 1e-300)


def run_decompose(args) -> List[CheckRecord]:
    grid = parse_grid(args.grid)
    eps = parse_medium(args.medium)
    s = args.s
    tol = args.tol if args.tol is not None else 1e-10
    correction = args.correction == "on"
    truth = None
    if args.input:
        try:
            grid, F = read_grid_field(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from None
        if F.ndim != 2:
            raise UsageError("decompose needs a vector field file")
    else:
        name = args.builtin
        if name == "dirichlet-ball":
            w = (1 + grid.node_r**2) ** (-s)
            F = eps.apply_inverse(grid.points, w[:, None] * mf.dirichlet_ball_field(grid.points))
        elif name == "lemma-mix":
            truth = mf.lemma_mix(grid, s, eps)
            F = truth.F
        elif name == "manufactured-mix":
            if correction:
                truth = mf.three_part_mix(grid, s, eps)
            else:
                truth = mf.lemma_mix(grid, s, eps)
            F = truth.F
        else:
            raise UsageError(f"unknown builtin {name!r}")

    if correction:
        res = decompose_with_correction(F, s, eps, grid, tol)
    else:
        res = weighted_decompose(F, s, eps, grid, tol)
    d = res.diagnostics
    checks = [
        _rec("reconstruction", d["reconstruction_error"] <= 1e-12, d["reconstruction_error"], 1e-12),
    ]
    orth = d.get("orthogonality", d.get("post_subtraction_orthogonality"))
    checks.append(_rec("orthogonality", orth <= 1e-8, orth, 1e-8))
    checks.append(_rec("weak_divergence", d["weak_divergence"] <= 10 * tol, d["weak_divergence"],
                       10 * tol, {"iterations": d["iterations"]}))
    if correction:
        n = d["correction_dimension"]
        expect = sum(mu(sig, 1) for sig in range(20) if sig < s - 1.5)
        checks.append(_rec("correction_dimension", n == expect, n, 0.0))
    if not args.input and args.builtin == "dirichlet-ball":
        frac = grid.norm(res.grad_part) / grid.norm(F)
        checks.append(_rec("dirichlet_solenoidal", frac <= 5e-2, frac, 5e-2))
    if truth is not None:
        ref = truth.F
        checks.append(_rec("grad_recovery", _rel(grid, res.grad_part, truth.grad_part, ref) <= 5e-2,
                           _rel(grid, res.grad_part, truth.grad_part, ref), 5e-2))
        checks.append(_rec("sol_recovery", _rel(grid, res.sol_part, truth.sol_part, ref) <= 5e-2,
                           _rel(grid, res.sol_part, truth.sol_part, ref), 5e-2))
        if truth.coefficients is not None and correction:
            err = float(np.max(np.abs(res.correction_coefficients - truth.coefficients))
                        / np.max(np.abs(truth.coefficients)))
            checks.append(_rec("coefficient_recovery", err <= 5e-2, err, 5e-2,
                               {"coefficients": [float(c) for c in res.correction_coefficients]}))
    if args.parts_out:
        prefix = args.parts_out
        write_grid_field(prefix + "_grad.csv", grid, res.grad_part)
        write_grid_field(prefix + "_sol.csv", grid, res.sol_part)
        write_grid_field(prefix + "_potential.csv", grid, res.potential)
        if res.correction_part is not None:
            write_grid_field(prefix + "_correction.csv", grid, res.correction_part)
    return checks


def run_report_all(args) -> List[CheckRecord]:
    checks = []
    ns = argparse.Namespace(**vars(args))
    ns.n_max, ns.k_max, ns.points, ns.h = 4, 2, 20, 1e-3
    checks += [_prefix("towers", c) for c in run_verify_towers(ns)]
    ns.s_list, ns.q_list, ns.d_presets = "-3,-2,-1.6", "1,2", "ball"
    checks += [_prefix("dims", c) for c in run_dims(ns)]
    ns.s_range, ns.R_list, ns.families, ns.n_max = "-3:3", "1e2,1e3,1e4", "V,U,Ucheck", 3
    checks += [_prefix("integrability", c) for c in run_integrability(ns)]
    cut = make_cutoff(CutoffSpec(2.0, 4.0))
    vol, flux = flux_pairing(cut)
    err = abs(vol - flux) / abs(flux)
    checks.append(_rec("flux_pairing", err <= 1e-6, err, 1e-6, {"volume": vol, "flux": flux}))
    ns.input, ns.parts_out, ns.tol = None, None, None
    for builtin, s, corr in (("dirichlet-ball", 0.0, "off"), ("lemma-mix", 1.0, "off"),
                             ("manufactured-mix", 2.0, "on")):
        ns.builtin, ns.s, ns.correction = builtin, s, corr
        checks += [_prefix(f"decompose[{builtin}]", c) for c in run_decompose(ns)]
    return checks


def _prefix(tag, rec):
    rec.name = f"{tag}.{rec.name}"
    return rec


COMMANDS = {
    "verify-towers": run_verify_towers,
    "dims": run_dims,
    "integrability": run_integrability,
    "decompose": run_decompose,
    "report-all": run_report_all,
}


# --------------------------------------------------------------------------
# parser and entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=7, help="PCG64 seed for sampled points")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--tol", type=float, default=None,
                        help="check tolerance (verify-towers) or solver tolerance (decompose)")
    common.add_argument("--grid", default="1,32,64,8", help="r0,R,n_r,n_ang")
    common.add_argument("--medium", default="identity", help="identity or radial:c,tau")
    common.add_argument("--s", type=float, default=0.0, help="weight exponent")
    common.add_argument("--correction", choices=("on", "off"), default="off")

    p = argparse.ArgumentParser(prog="weighted-hodge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    vt = sub.add_parser("verify-towers", parents=[common], help="tower identities vs FD oracle")
    vt.add_argument("--n-max", type=int, default=4)
    vt.add_argument("--k-max", type=int, default=2)
    vt.add_argument("--points", type=int, default=20)
    vt.add_argument("--h", type=float, default=1e-3)

    dm = sub.add_parser("dims", parents=[common], help="dimension formulas")
    dm.add_argument("--s-list", default="-3,-2,-1.6")
    dm.add_argument("--q-list", default="1,2")
    dm.add_argument("--d-presets", default="ball")

    it = sub.add_parser("integrability", parents=[common], help="classifier vs growth oracle")
    it.add_argument("--families", default="V,U,Ucheck")
    it.add_argument("--s-range", default="-3:3")
    it.add_argument("--R-list", default="1e2,1e3,1e4")
    it.add_argument("--n-max", type=int, default=3)

    dc = sub.add_parser("decompose", parents=[common], help="weighted Helmholtz decomposition")
    src = dc.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="vector field file")
    src.add_argument("--builtin", choices=("dirichlet-ball", "lemma-mix", "manufactured-mix"))
    dc.add_argument("--parts-out", help="prefix for CSV output of the computed parts")

    sub.add_parser("report-all", parents=[common], help="run every suite")
    return p


def make_report(command: str, args, checks: List[CheckRecord]) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "command")}
    return {
        "artifact_version": __version__,
        "command": command,
        "config": config,
        "checks": [c.as_dict() for c in checks],
        "status": "pass" if all(c.passed for c in checks) else "fail",
    }


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        checks = COMMANDS[args.command](args)
    except (UsageError, InvalidWeight, InadmissibleMedium, GridError, InvalidIndex, EmptyBasis) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FieldFileError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 2
    except (SolverDiverged, SingularGram) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    report = make_report(args.command, args, checks)
    text = render(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name}: measured={c.measured:.3e} tol={c.tolerance:.1e}",
              file=sys.stderr if not args.out else sys.stdout)
    return 0 if report["status"] == "pass" else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
