import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mimo_islr.rootfind import RealPolynomial, ZeroPolynomialError, real_roots, roots


def from_roots(rs, lead=1.0):
    # np.poly gives descending coefficients
    return RealPolynomial(lead * np.poly(rs)[::-1].real)


def test_degree_ten_recovery():
    rs = np.array([-3.1, -2.0, -0.7, -0.2, 0.15, 0.5, 1.0, 1.9, 2.5, 4.0])
    got = real_roots(from_roots(rs, 3.7))
    np.testing.assert_allclose(got, rs, atol=1e-6)


def test_complex_pairs_are_dropped():
    p = RealPolynomial(np.convolve([4, 0, 1], [-0.5, 1]))  # (x^2 + 4)(x - 0.5)
    np.testing.assert_allclose(real_roots(p), [0.5])


def test_double_root_reported_once():
    p = from_roots([0.5, 0.5, -2, 3j, -3j])
    np.testing.assert_allclose(real_roots(p), [-2, 0.5], atol=1e-7)


def test_zero_roots_stripped_exactly():
    p = RealPolynomial([0, 0, -1, 1])  # x^3 - x^2
    np.testing.assert_array_equal(np.sort(roots(p)), [0, 0, 1])


def test_zero_polynomial_raises():
    with pytest.raises(ZeroPolynomialError):
        roots(RealPolynomial([0, 0, 0]))
    assert RealPolynomial([0.0]).is_zero


def test_constant_has_no_roots():
    assert roots(RealPolynomial([2.0])).size == 0
    assert real_roots(RealPolynomial([2.0])).size == 0


def test_trimming_and_degree():
    p = RealPolynomial([1, 2, 1e-20])
    assert p.degree == 2
    assert len(p.trimmed(1e-14)) == 2
    with pytest.raises(ValueError):
        RealPolynomial(np.ones(12))


def test_evaluation():
    p = RealPolynomial([1, -2, 3])
    assert p(2.0) == pytest.approx(9.0)
    np.testing.assert_allclose(p(np.array([0.0, 1.0])), [1, 2])


def test_wide_dynamic_range():
    rs = np.array([1e-3, 0.5, 20.0])
    p = from_roots(rs, 1e8)
    np.testing.assert_allclose(real_roots(p), rs, rtol=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=10, unique=True),
       st.floats(0.1, 100))
def test_random_real_roots_recovered(rs, lead):
    rs = np.sort(np.asarray(rs))
    if rs.size > 1 and np.min(np.diff(rs)) < 0.05:
        rs = rs[np.concatenate([[True], np.diff(rs) >= 0.05])]
    got = real_roots(from_roots(rs, lead))
    assert got.size == rs.size
    np.testing.assert_allclose(got, rs, atol=1e-6)
