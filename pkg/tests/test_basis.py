import math
import random
from fractions import Fraction

import numpy as np
import pytest

from galeroot.basis import (
    ALL_KINDS,
    BasisContext,
    BasisKind,
    DegenerateDegreeError,
    basis_eval,
    basis_eval_exact,
    basis_realimag,
    real_root_locus,
    syzygy_triple,
    to_power_matrix,
)
from galeroot.symbolic import ONE, X, Y, ZERO, BivarPoly

B = BasisKind


def ctx(kind, d):
    return BasisContext(kind, d)


def test_eval_examples():
    assert basis_eval(ctx(B.POWER, 6), 3, 2) == 8
    assert basis_eval(ctx(B.BINOMIAL, 3), 0, 0) == 1
    assert basis_eval(ctx(B.FALLING, 4), 2, 3) == 6


def test_index_out_of_range():
    with pytest.raises(IndexError):
        basis_eval(ctx(B.POWER, 3), 4, 1.0)


def test_realimag_examples():
    assert basis_realimag(ctx(B.POWER, 4), 2) == (X * X - Y * Y, 2 * X * Y)
    assert basis_realimag(ctx(B.POWER, 4), 0) == (ONE, ZERO)
    re, im = basis_realimag(ctx(B.BINOMIAL, 2), 2)
    assert re == (X * X - Y * Y - X) / 2
    assert im == (2 * X * Y - Y) / 2


def test_syzygy_table():
    sq = X * X + Y * Y
    assert syzygy_triple(ctx(B.POWER, 5), 2) == (sq, 2 * X, ONE)
    p0, q0, r0 = syzygy_triple(ctx(B.BINOMIAL, 3), 0)
    assert p0 == sq
    assert q0 == 2 * (X + 1) ** 2 + 2 * Y * Y - 4
    assert r0 == (X + 2) ** 2 + Y * Y
    assert syzygy_triple(ctx(B.FALLING, 5), 2) == ((X - 2) ** 2 + Y * Y, 2 * (X - 2) - 1, ONE)
    assert syzygy_triple(ctx(B.ALT_POWER, 5), 1) == (sq, -2 * X, ONE)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_syzygy_identity(kind):
    for d in range(2, 11):
        c = ctx(kind, d)
        parts = [basis_realimag(c, i) for i in range(d + 1)]
        for k in range(d - 1):
            p, q, r = syzygy_triple(c, k)
            for part in (0, 1):
                total = p * parts[k][part] - q * parts[k + 1][part] + r * parts[k + 2][part]
                assert total.is_zero(), (kind, d, k, part)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_realimag_matches_exact_eval(kind):
    rnd = random.Random(1)
    c = ctx(kind, 5)
    parts = [basis_realimag(c, i) for i in range(6)]
    for _ in range(100):
        x = Fraction(rnd.randint(-40, 40), rnd.randint(1, 9))
        y = Fraction(rnd.randint(-40, 40), rnd.randint(1, 9))
        for i, (re, im) in enumerate(parts):
            assert (re.eval(x, y), im.eval(x, y)) == basis_eval_exact(c, i, x, y)


def test_binomial_float_eval_is_choose():
    c = ctx(B.BINOMIAL, 6)
    for i in range(7):
        # b_i(z) = C(z + d - i, d)
        for z in (0, 1, 3, 7):
            n = z + 6 - i
            expected = math.comb(n, 6) if n >= 0 else 0
            assert basis_eval(c, i, z) == pytest.approx(expected, abs=1e-9)


def test_power_matrix_examples():
    M = to_power_matrix(ctx(B.POWER, 3))
    assert M == [[int(i == j) for j in range(4)] for i in range(4)]
    assert to_power_matrix(ctx(B.FALLING, 2))[2] == [0, -1, 1]
    assert to_power_matrix(ctx(B.BINOMIAL, 2))[2] == [0, Fraction(-1, 2), Fraction(1, 2)]


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_power_matrix_round_trip(kind):
    M = [list(map(Fraction, row)) for row in to_power_matrix(ctx(kind, 6))]
    n = len(M)
    # Gauss-Jordan inverse over the rationals
    A = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        A[col] = [v / A[col][col] for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    inv = [row[n:] for row in A]
    for i in range(n):
        back = [sum(M[i][k] * inv[k][j] for k in range(n)) for j in range(n)]
        assert back == [int(i == j) for j in range(n)]


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_power_matrix_rows_evaluate_basis(kind):
    c = ctx(kind, 6)
    M = to_power_matrix(c)
    for i, row in enumerate(M):
        for z in (0.3 + 0.7j, -2.1 + 0.4j):
            val = sum(float(a) * z ** n for n, a in enumerate(row))
            assert val == pytest.approx(basis_eval(c, i, z), rel=1e-12, abs=1e-12)


def test_real_locus_examples():
    for d in (2, 5, 9):
        assert real_root_locus(ctx(B.BINOMIAL, d)) == [(-d, d - 1)]
        # b_0 b_1 = x is already negative on the whole negative axis
        assert real_root_locus(ctx(B.RISING, d)) == [(-math.inf, 0)]
    assert real_root_locus(ctx(B.POWER, 4)) == [(-math.inf, 0)]
    assert real_root_locus(ctx(B.POWER, 4), window=(-10, 10)) == [(-10, 0)]


@pytest.mark.parametrize("kind", [B.POWER, B.FALLING, B.RISING, B.BINOMIAL])
def test_real_locus_against_sign_table(kind):
    c = ctx(kind, 5)
    pieces = real_root_locus(c)
    for x in np.linspace(-9.3, 9.1, 401):
        vals = [basis_eval(c, i, x).real for i in range(6)]
        mixed = min(vals) * max(vals) <= 0 or any(abs(v) < 1e-12 for v in vals)
        inside = any(lo <= x <= hi for lo, hi in pieces)
        assert mixed == inside, x


def test_degenerate_degree():
    with pytest.raises(DegenerateDegreeError):
        ctx(B.POWER, 1).require_complex()
    assert basis_eval(ctx(B.POWER, 1), 1, 2.0) == 2.0


def test_parse_aliases():
    assert BasisKind.parse("binomial-coefficient") is B.BINOMIAL
    with pytest.raises(ValueError):
        BasisKind.parse("chebyshev")
