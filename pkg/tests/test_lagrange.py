from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specurve.errors import InvalidInput
from specurve.exactcore import TruncatedSeries, series_exp
from specurve.lagrange import (InvertibleGerm, catalan_numbers, catalan_z, check_catalan_curve,
                               check_tree_identities, exp_series, lagrange_invert,
                               lambert_inverse)


def test_identity_inversion():
    y = lagrange_invert(InvertibleGerm(TruncatedSeries.one(order=6, var="y"), 5))
    assert y.items() == [(1, 1)]


def test_lambert_closed_form():
    y = lambert_inverse(30)
    assert all(y[k] == Fraction(k ** (k - 1), factorial(k)) for k in range(1, 31))


def test_catalan_from_inversion():
    f = TruncatedSeries.from_coeffs([1, 0, 1], order=40, var="y")
    y = lagrange_invert(InvertibleGerm(f, 29))
    cat = catalan_numbers(15)
    assert [y[2 * m + 1] for m in range(15)] == cat
    assert all(y[2 * m] == 0 for m in range(15))


def test_catalan_numbers_examples():
    # C_0..C_{N-1}; the list 1, 2, 5, 14, 42, 132 starts at C_1
    assert catalan_numbers(6) == [1, 1, 2, 5, 14, 42]
    assert catalan_numbers(7)[1:] == [1, 2, 5, 14, 42, 132]
    assert catalan_numbers(1) == [1]
    assert catalan_numbers(10)[-1] == 4862


def test_germ_validation():
    with pytest.raises(InvalidInput):
        InvertibleGerm(TruncatedSeries.from_coeffs([0, 1], order=5, var="y"), 3)
    with pytest.raises(InvalidInput):
        InvertibleGerm(TruncatedSeries.from_coeffs([1, 1], order=2, var="y"), 5)


def _round_trip(y, f):
    """y / f(y) as a series in x."""
    return y * f.compose(y).reciprocal()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5), st.integers(1, 3))
def test_round_trip_random(tail, lead):
    N = 8
    f = TruncatedSeries.from_coeffs([lead] + tail, order=N + 1, var="y")
    y = lagrange_invert(InvertibleGerm(f, N))
    back = _round_trip(y, f.truncate(N + 1))
    x = TruncatedSeries.monomial(1, order=back.order, var="x")
    assert back.order >= N + 1
    assert back.agrees_with(x)


def test_lambert_round_trip_order_30():
    N = 30
    y = lambert_inverse(N)
    e = series_exp(TruncatedSeries.from_coeffs([0, -1], order=N + 1, var="y"))
    back = y * e.compose(y)
    assert back.order >= N + 1
    assert back.agrees_with(TruncatedSeries.monomial(1, order=back.order, var="x"))


def test_catalan_curve_order_41():
    rep = check_catalan_curve(41)
    assert rep.passed
    assert min(rep.trusted_orders().values()) >= 41


def test_catalan_z_layout():
    z = catalan_z(9)
    assert [z.coeff(-(2 * m + 1)) for m in range(5)] == [1, 1, 2, 5, 14]
    assert z.coeff(-2) == 0


def test_tree_identities():
    rep = check_tree_identities(40, 30)
    assert rep.passed
    assert rep.ode_residual.order >= 30


def test_exp_series_coefficients():
    e = exp_series(5)
    assert e[4] == Fraction(1, 24)
