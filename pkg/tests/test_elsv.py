from fractions import Fraction

import pytest

from specurve.elsv import (HodgeKey, assemble_H_poly, check_top_bottom, default_offgrid_points,
                           extract_hodge_integrals, fit_hodge_polynomial, polynomiality_check,
                           w_of_t, xi_hat, xi_numeric_check)
from specurve.errors import InvalidInput
from specurve.exactcore import double_factorial
from specurve.intersections import psi_intersection
from specurve.multipoly import MultiPoly

PAIRS = [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)]


def test_xi_examples():
    assert xi_hat(0).coeffs == (-1, 1)
    assert xi_hat(1).coeffs == (0, 0, -1, 1)
    assert xi_hat(2).coeffs == (0, 0, 0, 2, -5, 3)


def test_xi_structure_to_30():
    for n in range(31):
        xi = xi_hat(n)
        assert xi.degree == 2 * n + 1
        assert xi.coefficient(2 * n + 1) == double_factorial(2 * n - 1)
        if n >= 1:
            assert xi.coefficient(2 * n) == -double_factorial(2 * n + 1) // 3
            assert xi.coefficient(n + 1) * (-1) ** n > 0
            assert all(xi.coefficient(k) == 0 for k in range(n + 1))


def test_w_of_t():
    w = w_of_t(8)
    assert w.coeff(-2) == Fraction(1, 2)
    assert w.coeff(-1) == 0
    assert w.coeff(-5) == Fraction(1, 5)


@pytest.mark.parametrize("n,t,value", [(0, 2, 1), (1, 2, 4), (0, 3, 2)])
def test_xi_numeric(n, t, value):
    r = xi_numeric_check(n, t)
    assert r.exact == value
    assert r.passed
    assert r.difference < 1e-9 and r.width < 1e-9


def test_xi_numeric_rejects_divergent():
    with pytest.raises(InvalidInput):
        xi_numeric_check(0, 1)


def test_extraction_examples(store):
    b11 = extract_hodge_integrals(1, 1, store)
    assert b11[HodgeKey.make(1, (1,))] == Fraction(1, 24)
    assert b11[HodgeKey.make(1, (0,))] == Fraction(1, 24)
    assert extract_hodge_integrals(0, 3, store) == {HodgeKey.make(0, (0, 0, 0)): 1}
    b21 = extract_hodge_integrals(2, 1, store)
    assert b21[HodgeKey.make(2, (2,))] == Fraction(7, 5760)
    assert b21[HodgeKey.make(2, (4,))] == Fraction(1, 1152)


def test_hodge_key_degree():
    k = HodgeKey.make(1, (0, 1))
    assert k == HodgeKey(1, (1, 0), 1)


@pytest.mark.parametrize("g,ell", PAIRS)
def test_polynomiality_offgrid(store, g, ell):
    fit = fit_hodge_polynomial(g, ell, store)
    points = default_offgrid_points(g, ell)
    assert len(points) == 5
    for mu, predicted, actual in polynomiality_check(fit, points, store):
        assert max(mu) > fit.grid_size and max(mu) <= 3 * g + ell + 4
        assert predicted == actual, mu


@pytest.mark.parametrize("g,ell", PAIRS)
def test_top_bottom(store, g, ell):
    brackets = extract_hodge_integrals(g, ell, store)
    checks = check_top_bottom(g, ell, brackets)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    names = {c.name for c in checks}
    assert {"psi", "lambda_g", "top_polynomial", "lowest_polynomial"} <= names


@pytest.mark.parametrize("g,ell", PAIRS)
def test_free_energy_shape(store, g, ell):
    H = assemble_H_poly(g, ell, extract_hodge_integrals(g, ell, store))
    assert H.poly.is_symmetric()
    assert H.total_degree == 3 * (2 * g - 2 + ell)
    assert H.lowest_degree == 2 * g - 3 + 2 * ell


def test_H11_closed_form(store):
    H = assemble_H_poly(1, 1, extract_hodge_integrals(1, 1, store)).poly
    assert H == MultiPoly.univariate([1, -1, -1, 1]) * Fraction(1, 24)
    # the t^0 term comes from xi_hat_0 = t - 1; the lowest full-support term is -t/24
    assert H.full_support_part().homogeneous_part(1) == MultiPoly(1, {(1,): Fraction(-1, 24)})


def test_top_coefficient_matches_dvv(store):
    H = assemble_H_poly(2, 1, extract_hodge_integrals(2, 1, store)).poly
    assert H.coefficient((9,)) / double_factorial(7) == psi_intersection(2, (4,))


def test_assemble_rejects_missing(store):
    brackets = extract_hodge_integrals(1, 1, store)
    brackets.pop(HodgeKey.make(1, (0,)))
    with pytest.raises(InvalidInput):
        assemble_H_poly(1, 1, brackets)


def test_unstable_extraction_rejected(store):
    with pytest.raises(InvalidInput):
        fit_hodge_polynomial(0, 2, store)
