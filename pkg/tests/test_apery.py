from fractions import Fraction
from math import factorial

import pytest

from specurve.apery import (AperyPair, apery_closed, apery_solve, beukers_integral,
                            growth_constant, irrationality_report, mystery_lhs, ode_residuals,
                            quantum_period, zeta3_enclosure, zeta3_partial_sum_enclosure)
from specurve.errors import InvalidInput
from specurve.exactcore import lcm_range


def test_recursion_examples():
    assert apery_solve(1, 5, 4) == [1, 5, 73, 1445, 33001]
    assert apery_solve(0, 6, 3) == [0, 6, Fraction(351, 4), Fraction(62531, 36)]
    B = apery_solve(0, 6, 7)
    assert B[4:] == [Fraction(11424695, 288), Fraction(35441662103, 36000),
                     Fraction(20637706271, 800), Fraction(963652602684713, 1372000)]


def test_closed_forms_match_recursion():
    A = apery_solve(1, 5, 60)
    B = apery_solve(0, 6, 60)
    for n in range(61):
        assert apery_closed(n) == (A[n], B[n])


def test_casoratian():
    A = apery_solve(1, 5, 30)
    B = apery_solve(0, 6, 30)
    for k in range(1, 31):
        assert A[k] * B[k - 1] - A[k - 1] * B[k] == Fraction(-6, k ** 3)


def test_mystery_formula():
    assert [mystery_lhs(n) for n in (0, 1, 3)] == [1, 5, 1445]
    A = apery_solve(1, 5, 20)
    assert all(mystery_lhs(n) == A[n] for n in range(21))


def test_pair_invariants():
    for n in range(61):
        p = AperyPair(n, *apery_closed(n))
        assert (lcm_range(max(n, 1)) ** 3 * p.B).denominator == 1


def test_quantum_period():
    g = quantum_period(8)
    assert g[:3] == [1, 0, 24]
    # plain power-series coefficients, not integers in general
    direct = [sum(Fraction(apery_closed(k)[0] * (-5) ** (d - k), factorial(k) * factorial(d - k))
                  for k in range(d + 1)) for d in range(9)]
    assert g == direct
    assert g[6] == Fraction(52165, 6)


def test_ode_residuals_order_40():
    rep = ode_residuals(40)
    assert rep.passed, rep.failures
    assert rep.residuals["Q*beta"].items() == [(1, 6)]
    assert rep.residuals["P*A"].is_zero()
    assert rep.residuals["P*A"].order >= 41


def test_zeta3_enclosures_agree():
    fine = zeta3_enclosure(256)
    coarse = zeta3_partial_sum_enclosure(2000)
    assert coarse.a <= fine.a and fine.b <= coarse.b
    assert fine.delta < 2 ** -250


def test_report_invariants():
    rep = irrationality_report(40, 256)
    assert 0.000153 < rep.row(2).gap.a < rep.row(2).gap.b < 0.000154
    gaps = [r.gap for r in rep.rows]
    assert all(g.a > 0 for g in gaps)
    assert all(b.b < a.a for a, b in zip(gaps, gaps[1:]))
    assert all(r.kappa.a > 1 for r in rep.rows if r.n >= 5)
    assert 1.0 < rep.row(20).kappa.a and rep.row(20).kappa.b < 1.2
    assert rep.row(30).d3B_integral
    assert rep.cross_checks and all(ok for _, ok in rep.cross_checks)
    assert abs(rep.growth_fit[0] + 1.5) < 0.1
    lo, hi = rep.growth_residual_range
    assert hi - lo < 0.1


def test_report_rejects_low_precision():
    with pytest.raises(InvalidInput):
        irrationality_report(20, 64)
    with pytest.raises(InvalidInput):
        irrationality_report(5, 256)


def test_growth_constant_roots():
    C = growth_constant(128)
    assert 0 in C * C - 34 * C + 1


@pytest.mark.parametrize("n", [0, 1, 2])
def test_beukers(n):
    r = beukers_integral(n, 1e-3)
    assert r.relative_error < 1e-3


def test_beukers_preconditions():
    with pytest.raises(InvalidInput):
        beukers_integral(4)
    with pytest.raises(InvalidInput):
        beukers_integral(0, 1e-6)
