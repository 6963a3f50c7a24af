"""psi-class intersection numbers and lambda_g Hodge integrals.

<tau_{n_1} ... tau_{n_l}>_{g,l} is computed with the DVV (Virasoro) recursion
from the two configuration constants <tau_0^3>_{0,3} = 1 and
<tau_1>_{1,1} = 1/24. The lambda_g integrals come from the multinomial
formula with b_g built from Bernoulli numbers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, NamedTuple

from .errors import InvalidInput
from .exactcore import TruncatedSeries, double_factorial

__all__ = [
    "BASE_TAU0_CUBED",
    "BASE_TAU1_GENUS1",
    "is_stable",
    "psi_intersection",
    "bernoulli",
    "bg",
    "bg_from_sine_series",
    "multinomial",
    "lambda_g_integral",
    "RecursionCheck",
    "lambda_g_recursion_check",
]

BASE_TAU0_CUBED = Fraction(1)
BASE_TAU1_GENUS1 = Fraction(1, 24)


def is_stable(g: int, ell: int) -> bool:
    return g >= 0 and ell >= 0 and 2 * g - 2 + ell > 0


def _key(n: Iterable[int]) -> tuple:
    return tuple(sorted(n, reverse=True))


def psi_intersection(g: int, n: Iterable[int]) -> Fraction:
    """<tau_n>_{g,l}; zero unless |n| = 3g - 3 + l."""
    n = tuple(int(x) for x in n)
    if not is_stable(g, len(n)):
        raise InvalidInput(f"(g, l) = ({g}, {len(n)}) is not stable")
    if any(x < 0 for x in n):
        raise InvalidInput(f"tau indices must be nonnegative, got {n}")
    return _psi(g, _key(n))


def _psi_or_zero(g: int, n: Iterable[int]) -> Fraction:
    n = tuple(n)
    if g < 0 or any(x < 0 for x in n) or not is_stable(g, len(n)):
        return Fraction(0)
    return _psi(g, _key(n))


@lru_cache(maxsize=None)
def _psi(g: int, n: tuple) -> Fraction:
    ell = len(n)
    if sum(n) != 3 * g - 3 + ell:
        return Fraction(0)
    if (g, ell) == (0, 3):
        return BASE_TAU0_CUBED
    if (g, ell) == (1, 1):
        return BASE_TAU1_GENUS1
    n1, rest = n[0], n[1:]
    den = double_factorial(2 * n1 + 1)
    total = Fraction(0)
    for j, nj in enumerate(rest):
        m = n1 + nj - 1
        if m < 0:
            continue
        others = rest[:j] + rest[j + 1:]
        c = Fraction(double_factorial(2 * n1 + 2 * nj - 1),
                     den * double_factorial(2 * nj - 1))
        total += c * _psi_or_zero(g, (m,) + others)
    half = Fraction(0)
    idx = range(len(rest))
    for a in range(n1 - 1):
        b = n1 - 2 - a
        w = double_factorial(2 * a + 1) * double_factorial(2 * b + 1)
        inner = _psi_or_zero(g - 1, (a, b) + rest)
        for size in range(len(rest) + 1):
            for chosen in combinations(idx, size):
                nj = tuple(rest[k] for k in chosen)
                nk = tuple(rest[k] for k in idx if k not in chosen)
                for g1 in range(g + 1):
                    g2 = g - g1
                    if not (is_stable(g1, len(nj) + 1) and is_stable(g2, len(nk) + 1)):
                        continue
                    inner += _psi_or_zero(g1, (a,) + nj) * _psi_or_zero(g2, (b,) + nk)
        half += w * inner
    return total + half / (2 * den)


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """B_m with B_1 = -1/2, from sum_{k<=m} C(m+1, k) B_k = 0."""
    if m < 0:
        raise InvalidInput("Bernoulli index must be nonnegative")
    if m == 0:
        return Fraction(1)
    return -sum((comb(m + 1, k) * bernoulli(k) for k in range(m)), Fraction(0)) / (m + 1)


def bg(g: int) -> Fraction:
    """b_g = (2^(2g-1) - 1)/2^(2g-1) * |B_2g| / (2g)!, with b_0 = 1."""
    if g < 0:
        raise InvalidInput("b_g is defined for g >= 0")
    if g == 0:
        return Fraction(1)
    p = 2 ** (2 * g - 1)
    return Fraction(p - 1, p) * abs(bernoulli(2 * g)) / factorial(2 * g)


def bg_from_sine_series(g: int) -> Fraction:
    """Coefficient of s^(2g) in (s/2)/sin(s/2), by exact series division."""
    order = 2 * g + 1
    coeffs = [Fraction(0)] * order
    for k in range(g + 1):
        coeffs[2 * k] = Fraction((-1) ** k, 4 ** k * factorial(2 * k + 1))
    sinc = TruncatedSeries.from_coeffs(coeffs, order=order, var="s")
    return sinc.reciprocal()[2 * g]


def multinomial(total: int, parts: Iterable[int]) -> int:
    parts = tuple(parts)
    if any(p < 0 for p in parts) or sum(parts) != total:
        return 0
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def lambda_g_integral(g: int, n: Iterable[int]) -> Fraction:
    """<tau_n lambda_g>_{g,l} = multinomial(2g-3+l; n) * b_g; 0 off-degree.

    For g = 0, lambda_0 = 1 and this is the genus-zero psi formula.
    """
    n = tuple(n)
    if g < 0:
        raise InvalidInput("genus must be nonnegative")
    if any(x < 0 for x in n):
        return Fraction(0)
    total = 2 * g - 3 + len(n)
    if total < 0 or sum(n) != total:
        return Fraction(0)
    return multinomial(total, n) * bg(g)


class RecursionCheck(NamedTuple):
    passed: bool
    lhs: Fraction
    rhs: Fraction


def lambda_g_recursion_check(g: int, n: Iterable[int]) -> RecursionCheck:
    """(l-1)<tau_n lambda_g> = sum_{i<j} C(n_i+n_j, n_i) <tau_{n_i+n_j-1} tau_rest lambda_g>."""
    n = tuple(n)
    ell = len(n)
    if ell < 2:
        raise InvalidInput("the lambda_g recursion needs l >= 2")
    if sum(n) != 2 * g - 3 + ell:
        raise InvalidInput(f"|n| must equal 2g-3+l = {2 * g - 3 + ell}")
    lhs = (ell - 1) * lambda_g_integral(g, n)
    rhs = Fraction(0)
    for i, j in combinations(range(ell), 2):
        rest = tuple(x for k, x in enumerate(n) if k not in (i, j))
        rhs += comb(n[i] + n[j], n[i]) * lambda_g_integral(g, (n[i] + n[j] - 1,) + rest)
    return RecursionCheck(lhs == rhs, lhs, rhs)
