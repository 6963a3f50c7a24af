"""Laplace-transform polynomials and linear Hodge integrals from Hurwitz numbers.

The kernels xi_hat_n(t) = (t^2 (t-1) d/dt)^n (t - 1) are exact integer
polynomials. Linear Hodge integrals <tau_n lambda_j>_{g,l} are recovered by
exact tensor-grid Newton interpolation of

    G(mu) = H_g(mu) * prod(mu_i! / mu_i^mu_i) = sum_n c(n) prod mu_i^n_i,

with j fixed by degree, j = 3g - 3 + l - |n|, and <tau_n lambda_j> = (-1)^j c(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from mpmath import iv

from .errors import ConsistencyError, InvalidInput, PolynomialityError
from .exactcore import TruncatedSeries, as_rational, double_factorial, interval_precision
from .hurwitz import MemoStore, hurwitz_number
from .intersections import is_stable, lambda_g_integral, psi_intersection
from .multipoly import MultiPoly

__all__ = [
    "XiPolynomial",
    "xi_hat",
    "w_of_t",
    "XiNumericCheck",
    "xi_numeric_check",
    "HodgeKey",
    "HodgeFit",
    "fit_hodge_polynomial",
    "extract_hodge_integrals",
    "default_offgrid_points",
    "polynomiality_check",
    "FreeEnergyPoly",
    "assemble_H_poly",
    "BracketCheck",
    "check_top_bottom",
]


# ---------------------------------------------------------------------------
# xi_hat polynomials


@dataclass(frozen=True)
class XiPolynomial:
    n: int
    coeffs: tuple  # integer coefficients of t^0, t^1, ...

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t) -> Fraction:
        t = as_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0


def _apply_D(coeffs: Sequence[int]) -> tuple:
    """t^2 (t - 1) d/dt on an integer polynomial."""
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    out = [0] * (len(deriv) + 3)
    for k, c in enumerate(deriv):
        out[k + 3] += c
        out[k + 2] -= c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


@lru_cache(maxsize=None)
def _xi_coeffs(n: int) -> tuple:
    if n == 0:
        return (-1, 1)
    return _apply_D(_xi_coeffs(n - 1))


@lru_cache(maxsize=None)
def _a_sequence(n: int) -> int:
    """a_0 = 0, a_n = -[(n+1) a_{n-1} + (-1)^n n!]."""
    if n == 0:
        return 0
    return -((n + 1) * _a_sequence(n - 1) + (-1) ** n * factorial(n))


def _check_xi(n: int, coeffs: tuple) -> None:
    def fail(what):
        raise ConsistencyError(f"xi_hat_{n}: {what}")

    if len(coeffs) - 1 != 2 * n + 1:
        fail(f"degree {len(coeffs) - 1} != {2 * n + 1}")
    if n == 0:
        return
    if coeffs[2 * n + 1] != double_factorial(2 * n - 1):
        fail("leading coefficient is not (2n-1)!!")
    if coeffs[2 * n] * 3 != -double_factorial(2 * n + 1):
        fail("t^(2n) coefficient is not -(2n+1)!!/3")
    if any(coeffs[:n + 1]) or coeffs[n + 1] != (-1) ** n * factorial(n):
        fail("lowest term is not (-1)^n n! t^(n+1)")
    if coeffs[n + 2] != _a_sequence(n):
        fail(f"t^(n+2) coefficient {coeffs[n + 2]} != a_n = {_a_sequence(n)}")


def xi_hat(n: int) -> XiPolynomial:
    """xi_hat_n(t), with every structural coefficient law asserted."""
    if n < 0:
        raise InvalidInput("xi_hat index must be nonnegative")
    coeffs = _xi_coeffs(n)
    _check_xi(n, coeffs)
    return XiPolynomial(n, coeffs)


def w_of_t(order: int) -> TruncatedSeries:
    """w = sum_{m>=2} t^(-m)/m, stored over u = 1/t through u^order."""
    if order < 3:
        raise InvalidInput("w_of_t needs order >= 3")
    coeffs = [Fraction(0), Fraction(0)] + [Fraction(1, m) for m in range(2, order + 1)]
    return TruncatedSeries.from_coeffs(coeffs, order=order + 1, var="t", inverted=True)


@dataclass
class XiNumericCheck:
    n: int
    t: Fraction
    exact: Fraction
    partial_sum: tuple  # (lo, hi) enclosure of the first `terms` terms
    tail_bound: float
    difference: float   # upper bound on |partial sum - exact|
    width: float        # enclosure width including the tail
    passed: bool


def xi_numeric_check(n: int, t, terms: int = 600, bits: int = 128) -> XiNumericCheck:
    """Interval evaluation of sum_k k^(k+n) e^(-k) e^(-k w) / k! against xi_hat_n(t).

    The tail beyond ``terms`` is bounded with k! >= sqrt(2 pi k) (k/e)^k, so
    each omitted term is at most k^(n-1/2) e^(-k w) / sqrt(2 pi), and a
    geometric majorant closes the sum.
    """
    t = as_rational(t)
    if t <= 1:
        raise InvalidInput("xi numeric check needs t > 1 (w > 0)")
    if not 0 <= n <= 6:
        raise InvalidInput("xi numeric check supports 0 <= n <= 6")
    exact = xi_hat(n)(t)
    with interval_precision(bits):
        T = iv.mpf(t.numerator) / t.denominator
        w = -1 / T - iv.log(1 - 1 / T)
        if not w.a > 0:
            raise InvalidInput("w(t) is not provably positive at this precision")
        s = iv.mpf(0)
        for k in range(1, terms + 1):
            s += iv.mpf(k ** (k + n)) / factorial(k) * iv.exp(-k * (1 + w))
        K = terms
        power = max(n - 0.5, 0)
        q = (iv.mpf(K + 2) / (K + 1)) ** iv.mpf(power) * iv.exp(-w)
        if not q.b < 1:
            raise InvalidInput(f"{terms} terms are too few for a geometric tail bound")
        first = iv.mpf(K + 1) ** (iv.mpf(n) - iv.mpf(1) / 2) * iv.exp(-(K + 1) * w) \
            / iv.sqrt(2 * iv.pi)
        tail = first / (1 - q)
        E = iv.mpf(exact.numerator) / exact.denominator
        lo, hi = s.a, s.b + tail.b
        diff = max(abs(E - iv.mpf(lo)).b, abs(E - iv.mpf(hi)).b)
        width = (iv.mpf(hi) - iv.mpf(lo)).b
        passed = bool(lo <= E.a and E.b <= hi)
        return XiNumericCheck(n, t, exact, (float(s.a), float(s.b)), float(tail.b),
                              float(diff), float(width), passed)


# ---------------------------------------------------------------------------
# Hodge integral extraction


class HodgeKey(NamedTuple):
    genus: int
    n: tuple  # sorted descending
    j: int

    @classmethod
    def make(cls, g: int, n: Iterable[int]) -> "HodgeKey":
        n = tuple(sorted(n, reverse=True))
        return cls(g, n, 3 * g - 3 + len(n) - sum(n))


def _newton_to_monomial(values: np.ndarray, nodes: Sequence[int]) -> np.ndarray:
    """Monomial coefficients of the interpolant through (nodes[k], values[k])."""
    m = len(nodes)
    dd = [Fraction(v) for v in values]
    for level in range(1, m):
        for k in range(m - 1, level - 1, -1):
            dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - level])
    poly = [Fraction(0)] * m
    poly[0] = dd[m - 1]
    # Horner on the Newton form: p = dd[k] + (x - nodes[k]) p
    deg = 0
    for k in range(m - 2, -1, -1):
        shifted = [Fraction(0)] * m
        for i in range(deg + 1):
            shifted[i + 1] += poly[i]
            shifted[i] -= nodes[k] * poly[i]
        shifted[0] += dd[k]
        poly = shifted
        deg += 1
    out = np.empty(m, dtype=object)
    out[:] = poly
    return out


def _normalised_hurwitz(g: int, mu: Sequence[int], store) -> Fraction:
    value = hurwitz_number(g, mu, store)
    for m in mu:
        value *= Fraction(factorial(m), m ** m)
    return value


@dataclass
class HodgeFit:
    """Coefficient tensor c[n_1, ..., n_l] of G(mu) fitted on {1..m}^l."""

    genus: int
    points: int
    grid_size: int
    coefficients: np.ndarray
    brackets: dict = field(default_factory=dict)

    def predict(self, mu: Sequence[int]) -> Fraction:
        mu = [Fraction(x) for x in mu]
        if len(mu) != self.points:
            raise InvalidInput(f"expected {self.points} entries, got {len(mu)}")
        total = Fraction(0)
        for idx, c in np.ndenumerate(self.coefficients):
            if c:
                term = c
                for x, e in zip(mu, idx):
                    term *= x ** e
                total += term
        return total


def fit_hodge_polynomial(g: int, ell: int, store: MemoStore | None = None) -> HodgeFit:
    """Sample G on the full grid {1..3g-2+l}^l and interpolate exactly."""
    if not is_stable(g, ell):
        raise InvalidInput(f"(g, l) = ({g}, {ell}) is unstable; need 2g - 2 + l > 0")
    top = 3 * g - 3 + ell
    low = 2 * g - 3 + ell
    m = top + 1
    nodes = list(range(1, m + 1))
    values = np.empty((m,) * ell, dtype=object)
    for idx in product(range(m), repeat=ell):
        values[idx] = _normalised_hurwitz(g, [nodes[i] for i in idx], store)
    coeffs = values
    for axis in range(ell):
        coeffs = np.apply_along_axis(_newton_to_monomial, axis, coeffs, nodes)
    fit = HodgeFit(g, ell, m, coeffs)
    for idx, c in np.ndenumerate(coeffs):
        deg = sum(idx)
        if c and not low <= deg <= top:
            raise PolynomialityError(
                f"nonzero coefficient {c} at mu-exponent {idx} for (g, l) = ({g}, {ell}); "
                f"Hodge index j = {top - deg} is outside [0, {g}]")
    for idx, c in np.ndenumerate(coeffs):
        deg = sum(idx)
        if not low <= deg <= top:
            continue
        key = HodgeKey.make(g, idx)
        value = (-1) ** key.j * Fraction(c)
        prev = fit.brackets.get(key)
        if prev is not None and prev != value:
            raise ConsistencyError(f"fitted coefficients are not symmetric at {key}")
        fit.brackets[key] = value
    return fit


def extract_hodge_integrals(g: int, ell: int, store: MemoStore | None = None) -> dict:
    """Map HodgeKey -> <tau_n lambda_j>_{g,l} for every n in the allowed degree band."""
    return dict(fit_hodge_polynomial(g, ell, store).brackets)


def default_offgrid_points(g: int, ell: int, count: int = 5) -> list[tuple]:
    """Deterministic off-grid sample points with entries at most 3g + l + 4.

    The first entry runs above the fitting grid; the others stay at 1 or 2
    to keep the Hurwitz evaluations cheap.
    """
    grid_max = 3 * g - 2 + ell
    cap = 3 * g + ell + 4
    firsts = list(range(grid_max + 1, cap + 1))
    if count > len(firsts):
        raise InvalidInput(f"at most {len(firsts)} default off-grid points")
    return [(f,) + tuple(2 if i < k % ell else 1 for i in range(ell - 1))
            for k, f in enumerate(firsts[:count])]


def polynomiality_check(fit: HodgeFit, points: Iterable[Sequence[int]] | None = None,
                        store: MemoStore | None = None) -> list[tuple]:
    """(mu, predicted G(mu), recomputed G(mu)) at off-grid points."""
    if points is None:
        points = default_offgrid_points(fit.genus, fit.points)
    rows = []
    for mu in points:
        mu = tuple(mu)
        rows.append((mu, fit.predict(mu), _normalised_hurwitz(fit.genus, mu, store)))
    return rows


# ---------------------------------------------------------------------------
# free energies


@dataclass(frozen=True)
class FreeEnergyPoly:
    """H_{g,l}(t_1..t_l).

    ``lowest_degree`` is taken over monomials containing every t_i: the
    constant term of xi_hat_0 = t - 1 puts lower-degree terms in the full
    polynomial, and the lambda_g terms live at the bottom of the rest.
    """

    genus: int
    points: int
    poly: MultiPoly

    @property
    def total_degree(self) -> int:
        return self.poly.total_degree()

    @property
    def lowest_degree(self) -> int:
        return self.poly.full_support_part().lowest_degree()

    def top_part(self) -> MultiPoly:
        return self.poly.homogeneous_part(3 * (2 * self.genus - 2 + self.points))

    def lowest_part(self) -> MultiPoly:
        return self.poly.full_support_part().homogeneous_part(
            2 * self.genus - 3 + 2 * self.points)


def _xi_outer(ns: Sequence[int]) -> MultiPoly:
    """prod_i xi_hat_{n_i}(t_i) as a MultiPoly in len(ns) variables."""
    factors = [xi_hat(n).coeffs for n in ns]
    terms = {}
    for combo in product(*(range(len(f)) for f in factors)):
        c = 1
        for f, e in zip(factors, combo):
            c *= f[e]
            if not c:
                break
        if c:
            terms[combo] = c
    return MultiPoly(len(ns), terms)


def bracket_keys(g: int, ell: int) -> list[HodgeKey]:
    """All sorted index vectors in the band 2g-3+l <= |n| <= 3g-3+l."""
    top = 3 * g - 3 + ell
    low = 2 * g - 3 + ell
    keys = set()
    for idx in product(range(top + 1), repeat=ell):
        if low <= sum(idx) <= top:
            keys.add(HodgeKey.make(g, idx))
    return sorted(keys)


def assemble_H_poly(g: int, ell: int, brackets: dict) -> FreeEnergyPoly:
    """H_{g,l}(t) = sum_{n,j} (-1)^j <tau_n lambda_j> prod xi_hat_{n_i}(t_i)."""
    poly = MultiPoly(ell)
    for key in bracket_keys(g, ell):
        if key not in brackets:
            raise InvalidInput(f"missing bracket {key} for (g, l) = ({g}, {ell})")
        value = brackets[key]
        if not value:
            continue
        c = (-1) ** key.j * value
        for ordering in set(permutations(key.n)):
            poly = poly + _xi_outer(ordering) * c
    return FreeEnergyPoly(g, ell, poly)


class BracketCheck(NamedTuple):
    name: str
    key: object
    extracted: object
    reference: object
    passed: bool


def check_top_bottom(g: int, ell: int, brackets: dict) -> list[BracketCheck]:
    """j = 0 brackets against DVV, j = g brackets against the lambda_g formula,
    and the top / lowest homogeneous parts of H_{g,l} against their closed forms."""
    out = []
    for key, value in sorted(brackets.items()):
        if key.genus != g or len(key.n) != ell:
            continue
        if key.j == 0:
            ref = psi_intersection(g, key.n)
            out.append(BracketCheck("psi", key, value, ref, value == ref))
        if key.j == g:
            ref = lambda_g_integral(g, key.n)
            out.append(BracketCheck("lambda_g", key, value, ref, value == ref))
    H = assemble_H_poly(g, ell, brackets)
    top_ref = MultiPoly(ell)
    low_ref = MultiPoly(ell)
    for idx in product(range(3 * g - 2 + ell), repeat=ell):
        if sum(idx) == 3 * g - 3 + ell:
            c = psi_intersection(g, idx)
            for n in idx:
                c *= double_factorial(2 * n - 1)
            top_ref = top_ref + MultiPoly(ell, {tuple(2 * n + 1 for n in idx): c})
        if sum(idx) == 2 * g - 3 + ell:
            c = (-1) ** (3 * g - 3 + ell) * lambda_g_integral(g, idx)
            for n in idx:
                c *= factorial(n)
            low_ref = low_ref + MultiPoly(ell, {tuple(n + 1 for n in idx): c})
    top = H.top_part()
    low = H.lowest_part()
    out.append(BracketCheck("top_polynomial", (g, ell), top, top_ref, top == top_ref))
    out.append(BracketCheck("lowest_polynomial", (g, ell), low, low_ref, low == low_ref))
    return out
