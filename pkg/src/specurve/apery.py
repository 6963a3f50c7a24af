"""Apery's sequences for zeta(3) and the machinery around them.

A_n and B_n are carried exactly. Every statement about how well B_n / A_n
approximates zeta(3) is an interval statement: zeta(3) is enclosed from
series with proven remainder bounds, never read from a table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import numpy as np
from mpmath import iv

from .errors import ConsistencyError, InvalidInput, Refusal
from .exactcore import (DiffOperator, TruncatedSeries, as_rational, harmonic,
                        interval_precision, lcm_range)

__all__ = [
    "apery_step_poly",
    "apery_solve",
    "apery_A",
    "apery_B",
    "apery_closed",
    "AperyPair",
    "apery_pair",
    "mystery_lhs",
    "quantum_period",
    "P_OPERATOR",
    "Q_OPERATOR",
    "OdeReport",
    "ode_residuals",
    "zeta3_partial_sum_enclosure",
    "zeta3_enclosure",
    "growth_constant",
    "approximation_error",
    "IrrationalityRow",
    "IrrationalityReport",
    "irrationality_report",
    "BeukersResult",
    "beukers_integral",
]


def apery_step_poly(n: int) -> int:
    return 34 * n ** 3 + 51 * n ** 2 + 27 * n + 5


def apery_solve(u0, u1, N: int) -> list[Fraction]:
    """u_0..u_N from (n+1)^3 u_{n+1} = (34n^3+51n^2+27n+5) u_n - n^3 u_{n-1}."""
    if N < 1:
        raise InvalidInput("apery_solve needs N >= 1")
    u = [as_rational(u0), as_rational(u1)]
    for n in range(1, N):
        u.append((apery_step_poly(n) * u[n] - n ** 3 * u[n - 1]) / (n + 1) ** 3)
    return u[:N + 1]


def apery_A(n: int) -> int:
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    return sum(comb(n, k) ** 2 * comb(n + k, k) ** 2 for k in range(n + 1))


def apery_B(n: int) -> Fraction:
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    if n == 0:
        return Fraction(0)
    partial = sum((Fraction(1, m ** 3) for m in range(1, n + 1)), Fraction(0))
    total = Fraction(0)
    inner = Fraction(0)
    for k in range(n + 1):
        if k:
            inner += Fraction((-1) ** k, 2 * k ** 3 * comb(n, k) * comb(n + k, k))
        total += comb(n, k) ** 2 * comb(n + k, k) ** 2 * (partial - inner)
    return total


def apery_closed(n: int) -> tuple[int, Fraction]:
    return apery_A(n), apery_B(n)


@dataclass(frozen=True)
class AperyPair:
    n: int
    A: int
    B: Fraction

    def __post_init__(self):
        if self.A <= 0:
            raise ConsistencyError(f"A_{self.n} = {self.A} is not positive")
        d3 = lcm_range(max(self.n, 1)) ** 3
        if (d3 * self.B).denominator != 1:
            raise ConsistencyError(f"d_{self.n}^3 B_{self.n} is not an integer")


def apery_pair(n: int) -> AperyPair:
    return AperyPair(n, *apery_closed(n))


def mystery_lhs(n: int) -> Fraction:
    """(-1)^n (n!)^2 sum_{l+m=n} (2l+m)!(l+2m)!/((l!)^5 (m!)^5) (1 + (m-l)(H_{2l+m} + 2H_{l+2m} - 5H_m))."""
    if n < 0:
        raise InvalidInput("n must be nonnegative")
    total = Fraction(0)
    for l in range(n + 1):
        m = n - l
        w = Fraction(factorial(2 * l + m) * factorial(l + 2 * m),
                     factorial(l) ** 5 * factorial(m) ** 5)
        h = harmonic(2 * l + m) + 2 * harmonic(l + 2 * m) - 5 * harmonic(m)
        total += w * (1 + (m - l) * h)
    value = (-1) ** n * factorial(n) ** 2 * total
    if value.denominator != 1 or value <= 0:
        raise ConsistencyError(f"mystery sum at n={n} is {value}, not a positive integer")
    return value


def _egf(values: Sequence, order: int) -> TruncatedSeries:
    return TruncatedSeries.from_coeffs(
        [Fraction(values[k]) / factorial(k) for k in range(order)], order=order)


def quantum_period(N: int) -> list[Fraction]:
    """gamma_0..gamma_N, the coefficients of exp(-5t) * sum A_n t^n / n!."""
    if N < 1:
        raise InvalidInput("quantum_period needs N >= 1")
    order = N + 1
    alpha = _egf([apery_A(n) for n in range(order)], order)
    damp = _egf([(-5) ** k for k in range(order)], order)
    prod = damp * alpha
    return [prod[k] for k in range(order)]


# ---------------------------------------------------------------------------
# differential operators, in D = t d/dt

# (coefficient polynomial in t, power of D)
P_OPERATOR = DiffOperator.from_terms([
    ((0, -5, 1), 0), ((0, -27, 3), 1), ((0, -51, 3), 2), ((1, -34, 1), 3)])
Q_OPERATOR = DiffOperator.from_terms([
    ((0, -5, 1), 0), ((0, -27, 2), 1), ((0, -51, 1), 2), ((0, -34), 3), ((1,), 4)])


@dataclass
class OdeReport:
    order: int
    residuals: dict          # name -> TruncatedSeries
    expected: dict           # name -> TruncatedSeries
    failures: list = field(default_factory=list)
    singular_points: tuple = ()  # interval enclosures of the roots of t^2 - 34t + 1
    singular_check: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures and self.singular_check


def _D_minus_1(s: TruncatedSeries) -> TruncatedSeries:
    return s.euler() - s


def ode_residuals(N: int) -> OdeReport:
    """P A = 0, P B = 6t, Q alpha = 0, Q beta = 6t and (D-1)P on A, B, exactly below order N+1."""
    if N < 5:
        raise InvalidInput("ode_residuals needs N >= 5")
    order = N + 1
    A = [apery_A(n) for n in range(order)]
    B = [apery_B(n) for n in range(order)]
    gfA = TruncatedSeries.from_coeffs(A, order=order)
    gfB = TruncatedSeries.from_coeffs(B, order=order)
    six_t = TruncatedSeries.monomial(1, 6, order=order)
    zero = TruncatedSeries.zero(order=order)
    residuals = {
        "P*A": P_OPERATOR(gfA),
        "P*B": P_OPERATOR(gfB),
        "Q*alpha": Q_OPERATOR(_egf(A, order)),
        "Q*beta": Q_OPERATOR(_egf(B, order)),
    }
    residuals["(D-1)P*A"] = _D_minus_1(residuals["P*A"])
    residuals["(D-1)P*B"] = _D_minus_1(residuals["P*B"])
    expected = {"P*A": zero, "P*B": six_t, "Q*alpha": zero, "Q*beta": six_t,
                "(D-1)P*A": zero, "(D-1)P*B": zero}
    failures = []
    for name, res in residuals.items():
        diff = res - expected[name]
        for k in range(min(order, int(diff.order))):
            if diff[k]:
                failures.append(f"{name}: coefficient of t^{k} is {diff[k]}")
                break
    # leading symbol of P in D^3 is 1 - 34t + t^2
    lead = dict((k, poly) for poly, k in P_OPERATOR.terms)[3]
    if lead != (1, -34, 1):
        failures.append(f"leading coefficient of P is {lead}")
    with interval_precision(128):
        C = 17 + 12 * iv.sqrt(2)
        Cinv = 17 - 12 * iv.sqrt(2)
        ok = all(0 in (r * r - 34 * r + 1) for r in (C, Cinv)) and 1 in C * Cinv
        roots = (C, Cinv)
    return OdeReport(order, residuals, expected, failures, roots, bool(ok))


# ---------------------------------------------------------------------------
# zeta(3), C and the approximation error


def zeta3_partial_sum_enclosure(M: int, bits: int = 128):
    """sum_{m<=M} m^-3 plus the integral tail bounds 1/(2(M+1)^2) <= tail <= 1/(2M^2)."""
    if M < 1:
        raise InvalidInput("M must be positive")
    s = sum((Fraction(1, m ** 3) for m in range(1, M + 1)), Fraction(0))
    with interval_precision(bits):
        lo = iv.mpf(s.numerator) / s.denominator + iv.mpf(1) / (2 * (M + 1) ** 2)
        hi = iv.mpf(s.numerator) / s.denominator + iv.mpf(1) / (2 * M ** 2)
        return iv.mpf([lo.a, hi.b])


def zeta3_enclosure(bits: int = 256):
    """zeta(3) = (5/2) sum (-1)^(k-1) / (k^3 binom(2k, k)).

    The terms decrease in absolute value and alternate, so consecutive
    partial sums bracket the limit; both brackets are exact rationals.
    """
    K = bits // 2 + 8
    s = Fraction(0)
    for k in range(1, K + 1):
        s += Fraction((-1) ** (k - 1), k ** 3 * comb(2 * k, k))
    nxt = s + Fraction((-1) ** K, (K + 1) ** 3 * comb(2 * K + 2, K + 1))
    lo, hi = sorted((s * Fraction(5, 2), nxt * Fraction(5, 2)))
    with interval_precision(bits):
        return iv.mpf([(iv.mpf(lo.numerator) / lo.denominator).a,
                       (iv.mpf(hi.numerator) / hi.denominator).b])


def growth_constant(bits: int = 256):
    """C = 17 + 12 sqrt(2), the larger root of t^2 - 34t + 1."""
    with interval_precision(bits):
        return 17 + 12 * iv.sqrt(2)


def _rho(n: int) -> Fraction:
    # A_{n+1}/A_n >= rho_n because A_{n-1} <= A_n
    return Fraction(33 * n ** 3 + 51 * n ** 2 + 27 * n + 5, (n + 1) ** 3)


def approximation_error(n: int, A: Sequence[int], bits: int = 256):
    """Enclosure of zeta(3) - B_n/A_n = sum_{k>n} 6 / (k^3 A_k A_{k-1}).

    The sum telescopes from A_k B_{k-1} - A_{k-1} B_k = -6/k^3. Terms are
    summed to index K and the rest bounded geometrically: the ratio of
    consecutive terms is at most 1/(rho_{k-1} rho_k), which decreases in k.
    ``A`` must hold A_0..A_K with K >= n + bits/8 + 4.
    """
    K = len(A) - 1
    if K < n + bits // 8 + 4:
        raise InvalidInput(f"need A_0..A_{n + bits // 8 + 4} for n = {n}")
    with interval_precision(bits + 16):
        s = iv.mpf(0)
        for k in range(n + 1, K + 1):
            s += iv.mpf(6) / (iv.mpf(k) ** 3 * iv.mpf(A[k]) * iv.mpf(A[k - 1]))
        last = iv.mpf(6) / (iv.mpf(K) ** 3 * iv.mpf(A[K]) * iv.mpf(A[K - 1]))
        q = _rho(K - 1) * _rho(K)
        q = 1 / (iv.mpf(q.numerator) / q.denominator)
        tail = last * q / (1 - q)
        return iv.mpf([s.a, (s + tail).b])


@dataclass(frozen=True)
class IrrationalityRow:
    n: int
    A: int
    B: Fraction
    gap: object           # enclosure of |A_n zeta(3) - B_n|
    error: object         # enclosure of |zeta(3) - B_n / A_n|
    scaled_error: object  # error * C^(2n)
    kappa: object         # -log(error) / log(d_n^3 A_n)
    d3B_integral: bool


@dataclass
class IrrationalityReport:
    bits: int
    C: object
    zeta3: object
    rows: list
    kappa_limit: object
    growth_fit: tuple          # (slope of log A_n - n log C against log n, intercept)
    error_fit: tuple           # (slope of log error against n, expected -2 log C)
    growth_residual_range: tuple
    cross_checks: list

    def row(self, n: int) -> IrrationalityRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)


def _mid(x) -> float:
    return float(x.mid)


def irrationality_report(N: int, bits: int = 256, n_min: int = 1) -> IrrationalityReport:
    if N < 10:
        raise InvalidInput("irrationality_report needs N >= 10")
    if bits < 128:
        raise InvalidInput(f"precision must be at least 128 bits, got {bits}")
    extra = bits // 8 + 4
    A = [apery_A(n) for n in range(N + extra + 1)]
    rows = []
    with interval_precision(bits):
        C = growth_constant(bits)
        logC = iv.log(C)
        zeta3 = zeta3_enclosure(bits)
        cross = []
        for n in range(n_min, N + 1):
            B = apery_B(n)
            d3 = lcm_range(n) ** 3
            err = approximation_error(n, A, bits)
            if not err.a > 0:
                raise Refusal(f"error enclosure at n={n} is not positive at {bits} bits")
            rel = (err.b - err.a) / err.a
            if rel > 2 ** -32:
                need = bits + int(iv.log(rel).b / iv.log(2).a) + 40
                raise Refusal(f"{bits} bits cannot resolve the error at n={n}; use {need} bits")
            gap = err * A[n]
            kappa = -iv.log(err) / iv.log(iv.mpf(d3) * A[n])
            rows.append(IrrationalityRow(n, A[n], B, gap, err, err * C ** (2 * n),
                                         kappa, (d3 * B).denominator == 1))
            # independent route: A_n zeta(3) - B_n from the zeta(3) enclosure
            direct = zeta3 * A[n] - iv.mpf(B.numerator) / B.denominator
            if direct.a > 0:
                cross.append((n, bool(direct.a <= gap.b and gap.a <= direct.b)))
        kappa_limit = 2 * logC / (3 + logC)
    fit_rows = [r for r in rows if r.n >= min(10, N - 5)]
    ns = np.array([r.n for r in fit_rows], dtype=float)
    logA = np.array([float(iv.log(iv.mpf(r.A)).mid) for r in fit_rows])
    resid = logA - ns * _mid(logC)
    growth_fit = tuple(np.polyfit(np.log(ns), resid, 1))
    bounded = resid + 1.5 * np.log(ns)
    loge = np.array([float(iv.log(r.error).mid) for r in fit_rows])
    error_fit = (float(np.polyfit(ns, loge, 1)[0]), -2 * _mid(logC))
    return IrrationalityReport(bits, C, zeta3, rows, kappa_limit, growth_fit, error_fit,
                               (float(bounded.min()), float(bounded.max())), cross)


# ---------------------------------------------------------------------------
# the Beukers integral


@dataclass(frozen=True)
class BeukersResult:
    n: int
    value: float
    error_estimate: float   # |last level - previous level|
    nodes: int              # Gauss-Legendre nodes per axis at the last level
    reference: object       # enclosure of A_n zeta(3) - B_n
    relative_error: float   # against the reference midpoint


def _beukers_level(n: int, N: int) -> float:
    # graded map s -> s^3 on x, y and s -> 1 - (1-s)^3 on z clusters nodes
    # where 1 - z + xyz is small
    s, w = np.polynomial.legendre.leggauss(N)
    s = (s + 1) / 2
    w = w / 2
    xs, dx = s ** 3, 3 * s ** 2
    zs, dz = 1 - (1 - s) ** 3, 3 * (1 - s) ** 2
    X, Y, Z = np.meshgrid(xs, xs, zs, indexing="ij")
    W = np.einsum("i,j,k->ijk", w * dx, w * dx, w * dz)
    den = 1 - Z + X * Y * Z
    f = (X * Y * Z * (1 - X) * (1 - Y) * (1 - Z) / den) ** n / den
    return 0.5 * float(np.sum(W * f))


def beukers_integral(n: int, tolerance: float = 1e-3, max_nodes: int = 256) -> BeukersResult:
    """(1/2) iiint (xyz(1-x)(1-y)(1-z)/(1-z+xyz))^n / (1-z+xyz) over the unit cube."""
    if not 0 <= n <= 3:
        raise InvalidInput("beukers_integral supports 0 <= n <= 3")
    if tolerance < 1e-3:
        raise InvalidInput("tolerance must be at least 1e-3 (relative)")
    A, B = apery_closed(n)
    with interval_precision(128):
        ref = zeta3_enclosure(128) * A - iv.mpf(B.numerator) / B.denominator
    N = 8
    prev = _beukers_level(n, N)
    while True:
        N *= 2
        if N > max_nodes:
            raise Refusal(f"quadrature did not reach tolerance {tolerance} "
                          f"with {max_nodes} nodes per axis; last estimate {prev}")
        cur = _beukers_level(n, N)
        est = abs(cur - prev)
        if est <= tolerance * abs(cur):
            mid = _mid(ref)
            return BeukersResult(n, cur, est, N, ref, abs(cur - mid) / abs(mid))
        prev = cur
