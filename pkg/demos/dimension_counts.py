"""
Counting finite-dimensional pieces
==================================

Level counts mu, the Dirichlet dimension as a step function of the weight,
and which decaying towers are square integrable.
"""

import numpy as np

from weighted_hodge import verification as vf
from weighted_hodge.towers import TowerIndex
from weighted_hodge.weighted_spaces import (
    SpaceBasisSpec,
    dirichlet_dim,
    enumerate_basis,
    is_integrable,
    is_valid_weight,
    mu,
)

print("mu_sigma^q, N = 3")
for sigma in range(5):
    print(sigma, [mu(sigma, q) for q in range(4)])

print("\nmu_0^q = C(N, q) in higher dimensions")
for N in range(2, 7):
    print(N, [mu(0, q, N) for q in range(N + 1)])

# d_s^1 for the ball: one classical field plus the growing ones
s = np.round(np.arange(-6.0, 0.45, 0.25), 2)
print("\n   s   d_s^1")
for v in s:
    if is_valid_weight(v):
        print(f"{v:5.2f}  {dirichlet_dim(v, 1, 1)}")

# rows: floor, columns: s.  '+' means inside L2_s
print("\nV[-, n=2] integrable?  s = -2..2")
for ell in (-1, 0, 1, 2):
    marks = "".join("+" if is_integrable(TowerIndex("V", -1, ell, 2, 1), s) else "." for s in range(-2, 3))
    print(f"  floor {ell:2d}: {marks}")

# the growth oracle sees the same thing numerically
idx = TowerIndex("U", -1, 1, 1, 2)
ratios = vf.growth_ratios(idx, [-1.0, 0.0, 1.0], [1e2, 1e3, 1e4])
for s_val in (-1.0, 0.0, 1.0):
    seq = [ratios[(s_val, R)] for R in (1e2, 1e3, 1e4)]
    print(idx.label(), f"s={s_val:+.0f}", ["%.3f" % r for r in seq],
          "converges" if vf.classify_growth(seq) else "diverges")

print("\ncorrection space sizes:",
      {s: len(enumerate_basis(SpaceBasisSpec("Pbar", s - 2))) for s in (2.0, 3.0, 4.0)})
