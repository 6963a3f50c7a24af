"""Acceptance criteria 1-11, one PASS/FAIL line each.

The lines are printed as each test runs and repeated in the pytest terminal
summary. ``python3 tests/test_acceptance.py`` runs them without pytest.
"""

import time
from fractions import Fraction
from itertools import product
from math import factorial, log

from specurve.apery import (apery_closed, apery_solve, beukers_integral, irrationality_report,
                            mystery_lhs, ode_residuals, quantum_period)
from specurve.elsv import (_a_sequence, default_offgrid_points, extract_hodge_integrals,
                           fit_hodge_polynomial, polynomiality_check, xi_hat, xi_numeric_check)
from specurve.exactcore import TruncatedSeries, double_factorial, lcm_range, series_exp
from specurve.hurwitz import MemoStore, branch_count, hurwitz_number, hurwitz_oracle
from specurve.intersections import bg, bg_from_sine_series, lambda_g_integral, psi_intersection
from specurve.lagrange import (InvertibleGerm, catalan_numbers, check_catalan_curve,
                               lagrange_invert, lambert_inverse)
from specurve.recursion_check import main_recursion_residual

PAIRS = [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)]
RESULTS = []


def record(number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    return passed


def _partitions(d, largest=None):
    largest = d if largest is None else largest
    if d == 0:
        yield ()
        return
    for k in range(min(d, largest), 0, -1):
        for rest in _partitions(d - k, k):
            yield (k,) + rest


def test_criterion_01_hurwitz_oracle():
    start = time.perf_counter()
    store = MemoStore()
    cases, bad = 0, []
    for d in range(1, 5):
        for mu in _partitions(d):
            g = 0
            while branch_count(g, mu) <= 6:
                cases += 1
                if hurwitz_number(g, mu, store) != hurwitz_oracle(g, mu, 4, 6):
                    bad.append((g, mu))
                g += 1
    elapsed = time.perf_counter() - start
    ok = not bad and cases > 0 and elapsed < 60
    assert record(1, ok, f"cut-and-join == monodromy oracle on {cases} cases "
                         f"(|mu| <= 4, r <= 6), mismatches {bad}, {elapsed:.2f}s < 60s")


def test_criterion_02_polynomiality():
    start = time.perf_counter()
    store = MemoStore()
    counts, bad = [], []
    for g, ell in PAIRS:
        fit = fit_hodge_polynomial(g, ell, store)
        rows = polynomiality_check(fit, default_offgrid_points(g, ell), store)
        counts.append(len(rows))
        bad += [(g, ell, mu) for mu, p, a in rows if p != a]
    elapsed = time.perf_counter() - start
    ok = not bad and min(counts) >= 5 and elapsed < 300
    assert record(2, ok, f"fitted polynomials exact at {counts} off-grid points for {PAIRS}, "
                         f"{elapsed:.2f}s < 300s")


def test_criterion_03_witten_kontsevich():
    store = MemoStore()
    n_checked, bad = 0, []
    for g, ell in PAIRS:
        for key, value in extract_hodge_integrals(g, ell, store).items():
            if key.j == 0:
                n_checked += 1
                if value != psi_intersection(g, key.n):
                    bad.append(key)
    b11 = extract_hodge_integrals(1, 1, store)
    b21 = extract_hodge_integrals(2, 1, store)
    named = (b11[(1, (1,), 0)] == Fraction(1, 24) and b21[(2, (4,), 0)] == Fraction(1, 1152))
    ok = not bad and named
    assert record(3, ok, f"{n_checked} j=0 brackets equal DVV values; "
                         f"<tau_1>_1,1 = 1/24, <tau_4>_2,1 = 1/1152: {named}")


def test_criterion_04_lambda_g():
    store = MemoStore()
    n_checked, bad = 0, []
    for g, ell in PAIRS:
        for key, value in extract_hodge_integrals(g, ell, store).items():
            if key.j == g:
                n_checked += 1
                if value != lambda_g_integral(g, key.n):
                    bad.append(key)
    b2 = bg(2) == bg_from_sine_series(2) == Fraction(7, 5760)
    ok = not bad and b2 and n_checked > 0
    assert record(4, ok, f"{n_checked} j=g brackets equal multinomial * b_g; "
                         f"b_2 = 7/5760 by Bernoulli and sine-series routes: {b2}")


def test_criterion_05_main_recursion():
    start = time.perf_counter()
    store = MemoStore()
    zero = {(g, ell): main_recursion_residual(g, ell, store=store).is_zero()
            for g, ell in [(0, 4), (1, 2), (2, 1)]}
    elapsed = time.perf_counter() - start
    ok = all(zero.values()) and elapsed < 60
    assert record(5, ok, f"zero residual {zero}, {elapsed:.2f}s < 60s")


def test_criterion_06_xi_structure():
    laws = True
    for n in range(1, 31):
        c = xi_hat(n).coeffs
        laws &= c[2 * n + 1] == double_factorial(2 * n - 1)
        laws &= 3 * c[2 * n] == -double_factorial(2 * n + 1)
        laws &= not any(c[:n + 1]) and c[n + 1] == (-1) ** n * factorial(n)
        laws &= c[n + 2] == _a_sequence(n)
        laws &= _a_sequence(n) == -((n + 1) * _a_sequence(n - 1) + (-1) ** n * factorial(n))
    numeric = [xi_numeric_check(n, t) for n, t in [(0, 2), (1, 2), (0, 3)]]
    num_ok = all(r.passed and r.width < 1e-9 for r in numeric)
    widest = max(r.width for r in numeric)
    assert record(6, laws and num_ok, f"coefficient laws and a_n recursion for n <= 30: {laws}; "
                                      f"numeric checks pass with max width {widest:.1e} < 1e-9")


def test_criterion_07_lagrange():
    N = 30
    y = lambert_inverse(N)
    lam = all(y[k] == Fraction(k ** (k - 1), factorial(k)) for k in range(1, N + 1))
    f = TruncatedSeries.from_coeffs([1, 0, 1], order=N, var="y")
    yc = lagrange_invert(InvertibleGerm(f, 29))
    cat = [yc[2 * m + 1] for m in range(15)] == catalan_numbers(15)
    e = series_exp(TruncatedSeries.from_coeffs([0, -1], order=N + 1, var="y"))
    back = y * e.compose(y)
    trip = back.order >= N + 1 and back.agrees_with(
        TruncatedSeries.monomial(1, order=back.order, var="x"))
    assert record(7, lam and cat and trip,
                  f"Lambert inverse to order 30: {lam}; Catalan to C_14: {cat}; "
                  f"round trip to order 30: {trip}")


def test_criterion_08_catalan_curve():
    rep = check_catalan_curve(41)
    trusted = min(rep.trusted_orders().values())
    ok = rep.passed and trusted >= 41
    assert record(8, ok, f"residuals {sorted(rep.residuals)} vanish through u^40 "
                         f"(trusted below u^{trusted})")


def test_criterion_09_apery_exact():
    A = apery_solve(1, 5, 60)
    B = apery_solve(0, 6, 60)
    closed = all(apery_closed(n) == (A[n], B[n]) for n in range(61))
    mystery = all(mystery_lhs(n) == A[n] and A[n].denominator == 1 for n in range(21))
    ode = ode_residuals(40)
    integral = all((lcm_range(max(n, 1)) ** 3 * B[n]).denominator == 1 for n in range(61))
    gamma = quantum_period(2) == [1, 0, 24]
    ok = closed and mystery and ode.passed and integral and gamma
    assert record(9, ok, f"closed forms n <= 60: {closed}; mystery n <= 20: {mystery}; "
                         f"P/Q operators order 40: {ode.passed}; d_n^3 B_n n <= 60: {integral}; "
                         f"gamma = 1, 0, 24: {gamma}")


def test_criterion_10_asymptotics():
    start = time.perf_counter()
    rep = irrationality_report(40, 256)
    elapsed = time.perf_counter() - start
    scaled = [r.scaled_error for r in rep.rows if 15 <= r.n <= 35]
    ratios = [b / a for a, b in zip(scaled, scaled[1:])]
    ratio_ok = all(0.9 <= q.a and q.b <= 1.1 for q in ratios)
    lo = min(float(q.a) for q in ratios)
    hi = max(float(q.b) for q in ratios)
    kappas = [r.kappa for r in rep.rows if 5 <= r.n <= 40]
    above = all(k.a > 1 for k in kappas)
    k40 = rep.row(40).kappa
    limit = rep.kappa_limit
    # upper bound of |kappa_40 - limit| over both enclosures
    dist = max(float((k40 - limit).b), float((limit - k40).b))
    near = dist <= 0.05
    ok = ratio_ok and above and near and elapsed < 30
    detail = (f"scaled-error ratios in [{lo:.4f}, {hi:.4f}] for 15 <= n <= 35: {ratio_ok}; "
              f"kappa_n > 1 for 5 <= n <= 40: {above}; kappa_40 = {float(k40.mid):.4f} vs "
              f"limit {float(limit.mid):.4f}, distance {dist:.4f} <= 0.05: {near}; "
              f"{elapsed:.2f}s < 30s")
    record(10, ok, detail)
    if not near:
        d40 = log(lcm_range(40))
        print(f"  note: kappa_n -> limit only as log d_n ~ n; log d_40 = {d40:.2f} against 40, "
              f"so kappa_40 sits {dist:.3f} above the limit (see README, acceptance)")
    assert ok


def test_criterion_11_beukers():
    start = time.perf_counter()
    r = beukers_integral(0, 1e-3)
    elapsed = time.perf_counter() - start
    ok = r.relative_error < 1e-3 and elapsed < 120
    assert record(11, ok, f"n=0 integral {r.value:.9f}, relative error {r.relative_error:.2e} "
                          f"< 1e-3 against the zeta(3) enclosure, {elapsed:.2f}s < 120s")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
