from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galeroot.symbolic import ONE, X, Y, ZERO, BivarPoly, add, eval_f, evaluate, mul, shift_x

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def polys(draw, max_deg=3, max_terms=5):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_deg))
        j = draw(st.integers(0, max_deg))
        terms[(i, j)] = draw(small)
    return BivarPoly(terms)


def test_additive_inverse_is_empty():
    p = add(X * X, -(X * X))
    assert p.is_zero() and p.terms == {}


def test_add_constant():
    assert add(X * X + Y * Y, ONE) == BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): 1})


def test_products():
    assert mul(X, Y) == BivarPoly.monomial(1, 1)
    assert mul(X + Y, X - Y) == X * X - Y * Y


def test_shift_examples():
    assert shift_x(X, 1) == X + 1
    assert shift_x(X * X, -1) == X * X - 2 * X + 1


def test_eval_examples():
    assert evaluate(X * X + Y * Y, 1, 1) == 2
    assert evaluate(ZERO, Fraction(3, 7), 5) == 0


def test_no_stored_zero_coefficients():
    p = BivarPoly({(1, 0): 0, (0, 1): Fraction(2, 4)})
    assert p.terms == {(0, 1): Fraction(1, 2)}


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a + ZERO == a and a * ONE == a


@given(polys(), polys(), small, small)
def test_evaluation_is_a_homomorphism(a, b, x, y):
    assert evaluate(a + b, x, y) == evaluate(a, x, y) + evaluate(b, x, y)
    assert evaluate(a * b, x, y) == evaluate(a, x, y) * evaluate(b, x, y)


@given(polys(), polys(), small)
def test_shift_is_ring_homomorphism(a, b, c):
    assert shift_x(a * b, c) == shift_x(a, c) * shift_x(b, c)
    assert shift_x(a + b, c) == shift_x(a, c) + shift_x(b, c)
    assert shift_x(shift_x(a, c), -c) == a


@given(polys(), small, small, small)
def test_shift_moves_argument(p, c, x, y):
    assert evaluate(shift_x(p, c), x, y) == evaluate(p, x + c, y)


@settings(max_examples=200)
@given(polys(max_deg=5, max_terms=8), small, small)
def test_float_eval_matches_exact(p, x, y):
    exact = evaluate(p, x, y)
    scale = sum(abs(float(c)) * abs(float(x)) ** i * abs(float(y)) ** j for (i, j), c in p.items())
    assert abs(eval_f(p, float(x), float(y)) - float(exact)) <= 1e-12 * (scale + 1e-300)


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        BivarPoly({(-1, 0): 1})
