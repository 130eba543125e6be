import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galeroot.basis import ALL_KINDS, BasisContext, BasisKind, syzygy_triple
from galeroot.determinant import (
    ExactPoint,
    chromatic_det,
    d_closed_eval,
    d_eval,
    d_poly,
    d_polys,
    det_deleted,
    det_extended,
    leading_asymptote,
    minor_eval,
)
from galeroot.galedual import (
    build_gale_dual,
    chromatic_equation_dual,
    ehrhart_constraint,
    extend_with_inequality,
)
from galeroot.symbolic import ONE, X, Y

from oracles import drop, drop_col, eval_matrix, frac_det

B = BasisKind
FOUR = [B.POWER, B.FALLING, B.RISING, B.BINOMIAL]


def rational_points(n, seed, lo=-40, hi=40):
    rnd = random.Random(seed)
    return [ExactPoint(Fraction(rnd.randint(lo, hi), rnd.randint(1, 9)),
                       Fraction(rnd.choice([-1, 1]) * rnd.randint(1, 40), rnd.randint(1, 9)))
            for _ in range(n)]


def test_boundary_values():
    for kind in ALL_KINDS:
        ctx = BasisContext(kind, 6)
        for j in range(5):
            assert d_poly(ctx, j, j + 1) == ONE
            assert d_poly(ctx, j, j + 2) == -syzygy_triple(ctx, j)[1]
        assert d_eval(ctx, 2, 3, 0.3 + 0.2j) == 1


def test_power_two_step():
    assert d_poly(BasisContext(B.POWER, 5), 1, 3) == -2 * X


def test_binomial_two_step_is_circle():
    for d in (3, 6, 9):
        ctx = BasisContext(B.BINOMIAL, d)
        for j in range(d - 1):
            k = j + 2
            shifted = d_poly(ctx, j, k).shift_x(Fraction(k + j - d - 1, 2))
            assert shifted == -2 * (X * X + Y * Y - Fraction(d * d - 1, 4))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_d_poly_matches_dense_deleted_det(kind):
    # D_{j,k} times the outer p/r products is the minor of Wbar without rows j, k
    d = 6
    ctx = BasisContext(kind, d)
    M = build_gale_dual(ctx).entries
    for pt in rational_points(4, 1):
        num = eval_matrix(M, pt.x, pt.y)
        for j, k in combinations(range(d + 1), 2):
            assert det_deleted(ctx, j, k, pt) == frac_det(drop(num, [j, k]))


def test_small_binomial_deleted_determinants():
    ctx = BasisContext(B.BINOMIAL, 3)
    (p0, q0, r0), (p1, q1, r1) = syzygy_triple(ctx, 0), syzygy_triple(ctx, 1)
    for pt in rational_points(20, 2):
        v = lambda poly: poly.eval(pt.x, pt.y)
        assert det_deleted(ctx, 0, 2, pt) == v(-q0 * r1)
        assert det_deleted(ctx, 0, 3, pt) == v(q0 * q1 - p1 * r0)
        assert det_deleted(ctx, 1, 3, pt) == v(-p0 * q1)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_float_recursion_matches_symbolic(kind):
    # exact evaluation of the symbolic determinant at the float points is the oracle
    rng = np.random.default_rng(5)
    for d in (3, 7, 10):
        ctx = BasisContext(kind, d)
        z = rng.uniform(-d, d, 12) + 1j * rng.uniform(-d, d, 12)
        for j in range(d):
            polys = d_polys(ctx, j)
            for k in range(j + 2, d + 1):
                num = d_eval(ctx, j, k, z)
                for w, v in zip(z, num):
                    exact = float(polys[k].eval(Fraction(w.real), Fraction(w.imag)))
                    assert abs(v - exact) <= 1e-10 * (1 + abs(exact))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_closed_form_agreement(kind):
    rng = np.random.default_rng(6)
    for d in (2, 5, 10):
        ctx = BasisContext(kind, d)
        z = rng.uniform(-d - 1, d + 1, 300) + 1j * rng.uniform(0.05, d + 1, 300) * rng.choice([-1, 1], 300)
        for j in range(d):
            for k in range(j + 1, d + 1):
                a = d_eval(ctx, j, k, z)
                b = d_closed_eval(ctx, j, k, z)
                assert np.all(np.abs(a - b) <= 1e-9 * (1 + np.abs(a))), (j, k)


def test_closed_form_refuses_real_axis():
    with pytest.raises(ValueError):
        d_closed_eval(BasisContext(B.POWER, 4), 0, 3, 1.5 + 1e-12j)


def test_power_closed_formula_and_zero_lines():
    ctx = BasisContext(B.POWER, 8)
    z = 1.3 * np.exp(0.7j)
    for n in range(1, 7):
        expected = (-1) ** n * ((z ** (n + 1) - np.conj(z) ** (n + 1)) / (z - np.conj(z))).real
        assert d_eval(ctx, 0, n + 1, z) == pytest.approx(expected, rel=1e-12)
        for r in (0.5, 2.0, 7.0):
            for l in range(1, n + 1):
                theta = math.pi * l / (n + 1)
                assert abs(d_eval(ctx, 0, n + 1, r * np.exp(1j * theta))) <= 1e-9 * r ** (2 * n) + 1e-12
                mid = math.pi * (l + 0.5) / (n + 1)
                assert abs(d_eval(ctx, 0, n + 1, r * np.exp(1j * mid))) > 1e-6 * r ** n
    assert abs(d_eval(ctx, 0, 3, np.exp(1j * math.pi / 3))) < 1e-12


def test_alt_power_closed_formula():
    ctx = BasisContext(B.ALT_POWER, 7)
    z = -0.4 + 1.1j
    for n in range(1, 6):
        expected = (-(z ** (n + 1) - np.conj(z) ** (n + 1)) / (np.conj(z) - z)).real
        assert d_eval(ctx, 1, n + 2, z) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_even_in_y(kind):
    for d in (2, 5, 10):
        ctx = BasisContext(kind, d)
        for j in range(d):
            assert all(p.is_even_in_y() for p in d_polys(ctx, j).values())


@settings(max_examples=60)
@given(st.sampled_from(ALL_KINDS), st.floats(-8, 8), st.floats(0.01, 8), st.integers(0, 5), st.integers(2, 6))
def test_conjugation_symmetry(kind, x, y, j, span):
    ctx = BasisContext(kind, 10)
    k = min(j + span, 10)
    assert d_eval(ctx, j, k, complex(x, y)) == d_eval(ctx, j, k, complex(x, -y))


def test_minor_formula_exact_all_indices():
    for kind in (B.BINOMIAL, B.FALLING, B.POWER):
        for d in (3, 5, 7):
            ctx = BasisContext(kind, d)
            M = build_gale_dual(ctx).entries
            for pt in rational_points(2, d):
                num = eval_matrix(M, pt.x, pt.y)
                for K in combinations(range(d + 1), 3):
                    sub = drop(num, K)
                    for c in range(d - 1):
                        expected = frac_det(drop_col(sub, c))
                        got = minor_eval(ctx, K, c, pt)
                        assert got == expected, (kind, d, K, c)
                        if c <= K[0] - 1 or c >= K[2] - 1:
                            assert got == 0


def test_minor_float_matches_dense():
    rng = np.random.default_rng(7)
    ctx = BasisContext(B.BINOMIAL, 8)
    gd = build_gale_dual(ctx)
    for z in rng.uniform(-6, 6, 40) + 1j * rng.uniform(0.1, 5, 40):
        num = gd.evaluate(z.real, z.imag)
        for K in [(0, 3, 8), (1, 4, 6), (2, 5, 7)]:
            sub = np.delete(num, K, axis=0)
            for c in range(7):
                ref = np.linalg.det(np.delete(sub, c, axis=1))
                scale = np.prod(np.linalg.norm(np.delete(sub, c, axis=1), axis=1))
                assert abs(minor_eval(ctx, K, c, z) - ref) <= 1e-10 * scale


@pytest.mark.parametrize("d", [4, 5, 7])
def test_extended_det_matches_dense(d):
    ctx = BasisContext(B.BINOMIAL, d)
    con = ehrhart_constraint(d)
    ext = extend_with_inequality(build_gale_dual(ctx), con)
    M = ext.matrix()
    for pt in rational_points(3, 8):
        num = eval_matrix(M, pt.x, pt.y)
        for K in combinations(range(d + 1), 3):
            assert det_extended(ctx, K, con.lam, pt) == frac_det(drop(num, K))


def test_ehrhart_specialisations():
    d = 6
    ctx = BasisContext(B.BINOMIAL, d)
    lam = ehrhart_constraint(d).lam
    t = [syzygy_triple(ctx, k) for k in range(d - 1)]
    for pt in rational_points(5, 9):
        v = lambda p: p.eval(pt.x, pt.y)
        P = [v(a) for a, _, _ in t]
        Q = [v(b) for _, b, _ in t]
        R = [v(c) for _, _, c in t]
        D = lambda j, k: d_eval(ctx, j, k, pt)
        for k in range(2, d):
            expected = (-1) ** d * math.prod(P[:k]) * D(k, d) - D(0, k) * math.prod(R[k - 1:])
            assert det_extended(ctx, (0, k, d), lam, pt) == expected
        expected = ((-1) ** d * (P[0] - Q[0]) * D(1, d) - (-1) ** d * P[1] * R[0] * D(2, d)
                    - math.prod(R))
        assert det_extended(ctx, (0, 1, d), lam, pt) == expected


def test_leading_asymptote():
    ctx = BasisContext(B.BINOMIAL, 8)
    assert leading_asymptote(ctx, 0, 8) == -8
    assert leading_asymptote(ctx, 3, 4) == 1
    for d in range(2, 11):
        ctx = BasisContext(B.BINOMIAL, d)
        for j in range(d):
            for k, poly in d_polys(ctx, j).items():
                n = k - j - 1
                assert poly.top_degree_part() == leading_asymptote(ctx, j, k) * (X * X + Y * Y) ** n
    with pytest.raises(ValueError):
        leading_asymptote(BasisContext(B.POWER, 4), 0, 2)


def test_leading_ratio():
    ctx = BasisContext(B.BINOMIAL, 8)
    R = 1e4
    for phi in (math.pi / 6, math.pi / 3, 2 * math.pi / 3):
        ratio = d_eval(ctx, 0, 8, R * np.exp(1j * phi)) / R ** 14
        assert ratio == pytest.approx(-8, rel=0.01)


@pytest.mark.parametrize("chi,d", [(0, 4), (1, 5)])
def test_chromatic_det_matches_dense(chi, d):
    ctx = BasisContext(B.BINOMIAL, d)
    eps = Fraction(1, 2)
    ext = chromatic_equation_dual(ctx, chi, eps)
    M = ext.matrix()
    for pt in rational_points(10, 10):
        num = eval_matrix(M, pt.x, pt.y)
        for K in combinations(range(ext.n_rows), 3):
            assert chromatic_det(ctx, chi, eps, K, pt) == frac_det(drop(num, K))


def test_chromatic_det_affine_in_eps():
    ctx = BasisContext(B.BINOMIAL, 4)
    for pt in rational_points(10, 11):
        for K in [(0, 2, 4), (1, 3, 4)]:
            v = [chromatic_det(ctx, 0, Fraction(e, 8), K, pt) for e in (1, 4, 7)]
            assert v[2] - v[1] == v[1] - v[0]


def test_index_errors():
    ctx = BasisContext(B.POWER, 4)
    with pytest.raises(IndexError):
        d_eval(ctx, 3, 3, 1j)
    with pytest.raises(IndexError):
        minor_eval(ctx, (0, 0, 2), 0, 1j)
