import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from galeroot.basis import ALL_KINDS, BasisContext, BasisKind, to_power_matrix
from galeroot.randstudy import SampleSpec, sample_coefficients
from galeroot.rootfind import (
    PolynomialInBasis,
    basis_residual,
    find_roots,
    find_roots_batch,
    polish,
    residual_ok,
    roots_in_basis,
    to_power,
)
from galeroot.rootlocus import angle_sum_array

from oracles import match_roots

B = BasisKind


def test_to_power_examples():
    p = PolynomialInBasis(BasisContext(B.BINOMIAL, 2), (1, 0, 1))
    assert np.array_equal(to_power(p), [1, 1, 1])
    q = PolynomialInBasis(BasisContext(B.POWER, 3), (0.5, 1, 0, 2))
    assert np.array_equal(to_power(q), [0.5, 1, 0, 2])
    ctx = BasisContext(B.FALLING, 4)
    M = to_power_matrix(ctx)
    for i in range(5):
        e = [0] * 5
        e[i] = 1
        assert np.array_equal(to_power(PolynomialInBasis(ctx, tuple(e))), [float(v) for v in M[i]])


def test_known_roots():
    assert match_roots(find_roots([1, 0, 1]), [1j, -1j]) < 1e-14
    assert match_roots(find_roots([1, 1, 1]), [(-1 + 1j * 3 ** 0.5) / 2, (-1 - 1j * 3 ** 0.5) / 2]) < 1e-14
    c = np.polynomial.polynomial.polyfromroots([-3, 2, 2j, -2j]).real
    assert match_roots(find_roots(c), [-3, 2, 2j, -2j]) < 1e-10


def test_zero_roots_and_degree():
    r = find_roots([0, 0, 2, 0, 1, 0])
    assert r.size == 4
    assert np.sum(r == 0) == 2
    assert match_roots(r[r != 0], [1j * 2 ** 0.5, -1j * 2 ** 0.5]) < 1e-12
    with pytest.raises(ValueError):
        find_roots([0, 0, 0])


def test_batch_rejects_zero_ends():
    with pytest.raises(ValueError):
        find_roots_batch([[0.0, 1.0, 1.0]])


def test_matches_numpy_on_random_polynomials():
    rng = np.random.default_rng(0)
    for n in (2, 5, 8, 12):
        C = rng.uniform(0.05, 1, (200, n + 1))
        R = find_roots_batch(C)
        assert residual_ok(C, R).all()
        for c, r in zip(C[:40], R[:40]):
            ref = np.roots(c[::-1])
            assert match_roots(r, ref) <= 1e-7 * (1 + np.abs(ref).max())


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_residual_contract_and_pairing(kind):
    for d in (3, 7, 12):
        ctx = BasisContext(kind, d)
        coeffs = sample_coefficients(SampleSpec(ctx, count=300, seed=d, ends_nonzero=True))
        M = np.array([[float(v) for v in row] for row in to_power_matrix(ctx)])
        C = coeffs @ M
        keep = (C[:, 0] != 0) & (C[:, -1] != 0)
        R = find_roots_batch(C[keep])
        assert residual_ok(C[keep], R).all()
        for r in R[:50]:
            nonreal = np.sort_complex(r[r.imag != 0])
            assert nonreal.size % 2 == 0
            assert match_roots(nonreal, np.conj(nonreal)) <= 1e-9 * (1 + np.abs(nonreal).max(initial=0))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_polish_never_increases_residual(kind):
    ctx = BasisContext(kind, 8)
    for a in sample_coefficients(SampleSpec(ctx, count=40, seed=1)):
        p = PolynomialInBasis(ctx, tuple(a))
        raw = find_roots(to_power(p))
        before = basis_residual(p, raw)
        after = basis_residual(p, polish(p, raw))
        assert np.all(after <= before * (1 + 1e-12) + 1e-16)


def test_roots_in_basis_examples():
    ctx = BasisContext(B.BINOMIAL, 6)
    r = roots_in_basis(PolynomialInBasis(ctx, (1,) * 7))
    nonreal = r[r.imag != 0]
    assert np.all(angle_sum_array(6, 0, 6, nonreal) >= np.pi - 1e-6)
    real = r[r.imag == 0].real
    assert np.all((real >= -6 - 1e-9) & (real <= 5 + 1e-9))
    e0 = roots_in_basis(PolynomialInBasis(ctx, (1, 0, 0, 0, 0, 0, 0)))
    assert np.allclose(np.sort(e0.real), [-6, -5, -4, -3, -2, -1], atol=1e-9)
    assert np.all(e0.imag == 0)


def test_exact_conversion_path():
    ctx = BasisContext(B.BINOMIAL, 3)
    p = PolynomialInBasis(ctx, (Fraction(1, 3), 0, 2, Fraction(5, 7)))
    q = PolynomialInBasis(ctx, (1 / 3, 0.0, 2.0, 5 / 7))
    assert np.allclose(to_power(p), to_power(q), rtol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 10), min_size=3, max_size=10))
def test_nonnegative_polynomials_have_no_positive_real_roots(c):
    r = find_roots(c)
    assert not np.any((r.imag == 0) & (r.real > 0))
