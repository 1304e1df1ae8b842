"""
Tower fields on one spherical harmonic
======================================

Walk down a tower with the symbolic operator table and compare every
step against finite differences.
"""

import numpy as np

from weighted_hodge import towers as tw
from weighted_hodge.towers import TowerIndex

rng = np.random.default_rng(0)
x = rng.normal(size=(4, 3))
x *= (1.5 / np.linalg.norm(x, axis=1))[:, None]

# start at the second power of the decaying potential on y_{2,3}
z = TowerIndex("Z", "-", 2, 2, 3)
print("start:", z.label(), "homogeneous of degree", tw.homogeneity_degree(z))

# grad lands on the odd floor of the div-grad tower, div walks back down
step = tw.apply_operator("grad", z)
print("grad ->", step.index.label())
while step is not None and step.index.floor >= 0:
    idx = step.index
    op = "div" if tw.field_kind(idx) == "vector" else "grad"
    analytic = tw.eval_term(tw.apply_operator(op, idx), x, "scalar" if op == "div" else "vector")
    numeric = tw.fd_oracle(lambda p, i=idx: tw.eval_tower_array(i, p), op, x, 1e-3)
    err = np.max(np.abs(analytic - numeric)) / max(np.max(np.abs(numeric)), 1e-300)
    print(f"  {op:4s} {idx.label():28s} fd mismatch {err:.1e}")
    step = tw.apply_operator(op, idx)

# the curl-curl tower alternates sign under curl
for ell in range(3, -2, -1):
    v = TowerIndex("V", -1, ell, 2, 3)
    t = tw.apply_operator("curl", v)
    print("curl", v.label(), "->", "0" if t is None else f"{t.coefficient:+g} * {t.index.label()}")

# at the ground floor the two towers coincide up to a constant
for n in range(1, 5):
    u = tw.eval_tower_array(TowerIndex("U", -1, -1, n, 1), x)
    v = tw.eval_tower_array(TowerIndex("V", -1, -1, n, 1), x)
    ratio = np.sum(u * v) / np.sum(u * u)
    print(f"n={n}: V/U = {ratio:+.12f}  (t + 1 = {tw.ground_constant(-1, n)})")

# normalization constants: float path vs exact rational
for n in range(4):
    print(n, [str(tw.xi_coeff_exact(-1, n, k)) for k in range(4)])
