import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weighted_hodge import towers as tw
from weighted_hodge import verification as vf
from weighted_hodge.errors import InvalidIndex, KindMismatch, OriginProximity, OriginSingular
from weighted_hodge.helmholtz.correction import potential_kappa
from weighted_hodge.towers import TowerIndex

RNG_POINTS = vf.random_shell_points(np.random.default_rng(11), 8)


def _pochhammer_oracle(sign, n, k):
    # direct Gamma-ratio evaluation with exact half-integer Gamma values
    a = 1 + sign * (Fraction(2 * n + 1, 2))

    def gamma_half(z):
        # Gamma(z) for z a half-integer, as Fraction * sqrt(pi)
        val, zz = Fraction(1), Fraction(1, 2)
        if z >= zz:
            while zz < z:
                val *= zz
                zz += 1
        else:
            while zz > z:
                zz -= 1
                val /= zz
        return val

    return gamma_half(a) / (4**k * math.factorial(k) * gamma_half(k + a))


@pytest.mark.parametrize("sign", [1, -1])
def test_xi_against_exact(sign):
    for n in range(9):
        for k in range(5):
            exact = tw.xi_coeff_exact(sign, n, k)
            assert exact == _pochhammer_oracle(sign, n, k)
            assert tw.xi_coeff(sign, n, k) == pytest.approx(float(exact), rel=1e-13)


def test_xi_known_values():
    assert tw.xi_coeff(-1, 0, 1) == pytest.approx(0.5)  # Delta(r/2) = 1/r
    assert tw.xi_coeff(1, 1, 1) == pytest.approx(1 / 10)
    assert tw.xi_coeff(-1, 1, 1) == pytest.approx(-1 / 2)


def test_exceptional_values():
    x = np.array([0.0, 3.0, 4.0])
    assert tw.eval_exceptional(-1, 0, x).value == pytest.approx(0.2)
    assert tw.eval_exceptional(-1, 2, x).value == pytest.approx(2.5)
    np.testing.assert_allclose(tw.eval_exceptional(-1, -1, x).value, -x / 125)
    assert tw.eval_exceptional(1, 0, x).value == pytest.approx(1.0)


def test_ground_identity_constant():
    for sign in (1, -1):
        for n in range(1, 6):
            for m in (1, 2 * n + 1):
                u = tw.eval_tower_array(TowerIndex("U", sign, -1, n, m), RNG_POINTS)
                v = tw.eval_tower_array(TowerIndex("V", sign, -1, n, m), RNG_POINTS)
                c = tw.ground_constant(sign, n)
                assert c == (n + 1 if sign > 0 else -n)
                np.testing.assert_allclose(v, c * u, atol=1e-12 * np.max(np.abs(v)))


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_potential_field_relations(sign, n):
    x = RNG_POINTS
    idx = TowerIndex("P", sign, 0, n, 2)
    P = tw.eval_tower_array(idx, x)
    z0 = tw.eval_tower_array(TowerIndex("Z", sign, 0, n, 2), x)
    r = np.linalg.norm(x, axis=-1)
    np.testing.assert_allclose(np.einsum("ij,ij->i", P, x / r[:, None]),
                               potential_kappa(sign, n) * r * z0, rtol=1e-12, atol=1e-14)
    assert tw.apply_operator("laplacian", idx) is None
    for op in ("div", "curl", "laplacian"):
        assert vf.fd_relative_error(idx, op, x, 1e-3) < 1e-7


def test_operator_table_shapes():
    t = tw.apply_operator("grad", TowerIndex("Z", -1, 2, 3, 4))
    assert t.index == TowerIndex("U", -1, 3, 3, 4) and t.coefficient == 1.0
    t = tw.apply_operator("curl", TowerIndex("V", 1, 2, 2, 1))
    assert t.index.floor == 1 and t.coefficient == -1.0
    assert tw.apply_operator("div", TowerIndex("V", 1, 1, 2, 1)) is None
    assert tw.apply_operator("curl", TowerIndex("U", 1, 1, 2, 1)) is None
    assert tw.apply_operator("grad", TowerIndex("ExceptionalU", 1, 0, 0, 1)) is None
    t = tw.apply_operator("curl", TowerIndex("P", -1, 0, 2, 1))
    assert t.coefficient == pytest.approx(1 / 2)  # -1/(t+1) with t = -3


def test_kind_mismatch_and_validation():
    with pytest.raises(KindMismatch):
        tw.apply_operator("curl", TowerIndex("Z", 1, 0, 1, 1))
    with pytest.raises(KindMismatch):
        tw.apply_operator("grad", TowerIndex("V", 1, 0, 1, 1))
    for args in [("V", 1, 0, 0, 1), ("P", -1, 0, 0, 1), ("U", 1, -2, 1, 1),
                 ("Z", 1, -1, 1, 1), ("ExceptionalU", 1, 0, 1, 1), ("Q", 1, 0, 1, 1),
                 ("U", 1, 0, 2, 6)]:
        with pytest.raises(InvalidIndex):
            TowerIndex(*args)
    with pytest.raises(InvalidIndex):
        TowerIndex("U", "x", 0, 1, 1)
    with pytest.raises(OriginSingular):
        tw.eval_tower(TowerIndex("Z", 1, 0, 1, 1), np.zeros(3))
    with pytest.raises(OriginProximity):
        tw.fd_oracle(lambda p: p[..., 0], "grad", np.array([1e-3, 0, 0]), 1e-3)


def test_sign_spellings():
    assert TowerIndex("U", "+", 0, 1).sign == 1
    assert TowerIndex("U", "minus", 0, 1).sign == -1
    assert TowerIndex("P", 1, 5, 1).floor == 0


def test_suites_pass():
    x = vf.random_shell_points(np.random.default_rng(7), 6)
    for rec in (vf.tower_equation_suite(x, 3, 2), vf.homogeneity_suite(x, 3, 2),
                vf.harmonicity_suite(x, 3), vf.ground_identity_suite(x, 4)):
        assert rec.passed, rec


indices = st.builds(
    lambda fam, sign, floor, n, frac: TowerIndex(
        fam, sign, floor, 0 if fam == "ExceptionalU" else n,
        1 if fam == "ExceptionalU" else 1 + int(frac * (2 * n + 1)) % (2 * n + 1)),
    st.sampled_from(["U", "V", "Z", "ExceptionalU", "P"]),
    st.sampled_from([1, -1]),
    st.integers(0, 3),
    st.integers(1, 4),
    st.floats(0, 0.999),
)


@settings(max_examples=60, deadline=None)
@given(indices, st.integers(0, 10_000))
def test_operator_matches_fd(idx, seed):
    x = vf.random_shell_points(np.random.default_rng(seed), 2)
    kind = tw.field_kind(idx)
    ops = ("grad", "laplacian") if kind == "scalar" else ("div", "curl", "laplacian")
    for op in ops:
        assert vf.fd_relative_error(idx, op, x, 1e-3) < 1e-6


@settings(max_examples=40, deadline=None)
@given(indices, st.floats(0.3, 4.0))
def test_homogeneity(idx, lam):
    x = RNG_POINTS[:3]
    a = tw.eval_tower_array(idx, lam * x)
    b = lam ** tw.homogeneity_degree(idx) * tw.eval_tower_array(idx, x)
    np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-13 * max(1.0, np.max(np.abs(b))))
