from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from specurve.errors import ConsistencyError
from specurve.multipoly import MultiPoly

terms_st = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-4, max_value=4, max_denominator=5), max_size=6)


def test_divide_by_difference_exact():
    t1, t2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    P = t1 * t1 * t1 - t2 * t2 * t2
    Q = P.divide_by_difference(0, 1)
    assert Q == t1 * t1 + t1 * t2 + t2 * t2
    with pytest.raises(ConsistencyError):
        (t1 + 1).divide_by_difference(0, 1)


@given(terms_st)
def test_division_round_trip(terms):
    P = MultiPoly(2, terms)
    diff = MultiPoly.variable(2, 0) - MultiPoly.variable(2, 1)
    assert (P * diff).divide_by_difference(0, 1) == P


def test_diagonal_remap_and_symmetry():
    P = MultiPoly(2, {(2, 1): 3})
    assert P.remap([0, 0], 1) == MultiPoly(1, {(3,): 3})
    S = P + P.permute([1, 0])
    assert S.is_symmetric() and not P.is_symmetric()


def test_evaluate_and_degrees():
    P = MultiPoly(2, {(0, 0): 1, (1, 2): Fraction(1, 2)})
    assert P.evaluate([2, 3]) == 10
    assert P.total_degree() == 3 and P.lowest_degree() == 0
    assert P.full_support_part() == MultiPoly(2, {(1, 2): Fraction(1, 2)})
