"""Lagrange inversion and the Catalan / rooted-tree spectral-curve checks.

The Lambert curve is fixed in the classical convention ``x = y e^{-y}``,
i.e. ``f(y) = e^y`` in ``x = y / f(y)``. The shifted convention
``x = y e^{1-y}`` follows by the substitution ``x -> e x`` and is not
implemented separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import ConsistencyError, InvalidInput
from .exactcore import DiffOperator, TruncatedSeries, apply_operator, series_exp

__all__ = [
    "InvertibleGerm",
    "lagrange_invert",
    "exp_series",
    "lambert_inverse",
    "catalan_numbers",
    "catalan_z",
    "CATALAN_OPERATOR",
    "CurveReport",
    "check_catalan_curve",
    "TreeReport",
    "check_tree_identities",
]


@dataclass(frozen=True)
class InvertibleGerm:
    """The function f in x = y / f(y), together with the requested inversion order."""

    f: TruncatedSeries
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise InvalidInput("inversion order must be at least 1")
        if self.f.inverted:
            raise InvalidInput("f must be an ordinary power series in y")
        if self.f.valuation != 0:
            raise InvalidInput("f(0) must be nonzero for Lagrange inversion")
        if self.f.order < self.order:
            raise InvalidInput(
                f"f is only known to order {self.f.order}; inversion to order "
                f"{self.order} needs y^0..y^{self.order - 1}")


def lagrange_invert(g: InvertibleGerm, var: str = "x") -> TruncatedSeries:
    """Inverse y(x) of x = y/f(y): c_k = [y^(k-1)] f(y)^k / k for k = 1..N."""
    n = g.order
    f = g.f.truncate(n)
    coeffs = [Fraction(0)]
    power = TruncatedSeries.one(n, g.f.var)
    for k in range(1, n + 1):
        power = power * f
        coeffs.append(power[k - 1] / k)
    return TruncatedSeries.from_coeffs(coeffs, order=n + 1, var=var)


def exp_series(order: int, var: str = "y") -> TruncatedSeries:
    """e^y to the given exclusive order, as exact rationals."""
    return series_exp(TruncatedSeries.from_coeffs([0, 1], order=order, var=var))


def lambert_inverse(order: int) -> TruncatedSeries:
    """y(x) with x = y e^{-y}, i.e. sum k^(k-1) x^k / k!."""
    return lagrange_invert(InvertibleGerm(exp_series(order), order))


def catalan_numbers(n: int) -> list[int]:
    """C_0..C_{n-1} from C_m = 2(2m-1)/(m+1) C_{m-1}, run in rationals."""
    if n < 1:
        raise InvalidInput("catalan_numbers needs N >= 1")
    out = [Fraction(1)]
    for m in range(1, n):
        out.append(Fraction(2 * (2 * m - 1), m + 1) * out[-1])
    for m, c in enumerate(out):
        if c.denominator != 1:
            raise ConsistencyError(f"C_{m} = {c} is not an integer")
    return [int(c) for c in out]


def catalan_z(order: int) -> TruncatedSeries:
    """z(x) = sum C_m x^(-2m-1), stored over u = 1/x with u-exponents <= order."""
    n_terms = order // 2 + 1
    cat = catalan_numbers(n_terms)
    coeffs = [Fraction(0)] * (order + 1)
    for m, c in enumerate(cat):
        if 2 * m + 1 <= order:
            coeffs[2 * m + 1] = Fraction(c)
    return TruncatedSeries.from_coeffs(coeffs, order=order + 1, var="x", inverted=True)


# (x^2 - 4) d^2/dx^2 + x d/dx - 1
CATALAN_OPERATOR = DiffOperator.from_terms(
    [((-4, 0, 1), 2), ((0, 1), 1), ((-1,), 0)], var="x", euler=False)


@dataclass
class CurveReport:
    order: int
    residuals: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())

    def trusted_orders(self) -> dict:
        return {name: r.order for name, r in self.residuals.items()}


def check_catalan_curve(order: int) -> CurveReport:
    """Residuals of z^2 - xz + 1, of the Picard-Fuchs operator on z, and of
    dF_{0,1}/dx + z with F_{0,1} = -z^2/2 + log z.

    log z is never formed: only d/dx log z = z'/z enters.
    """
    if order < 4:
        raise InvalidInput("check_catalan_curve needs order >= 4")
    z = catalan_z(order)
    x_times_z = z.shift(1)
    quadratic = z * z - x_times_z + 1
    ode = apply_operator(CATALAN_OPERATOR, z)
    dz = z.derivative()
    dF = -(z * dz) + dz * z.reciprocal()
    report = CurveReport(order)
    report.residuals = {
        "quadratic": quadratic,
        "picard_fuchs": ode,
        "free_energy": dF + z,
    }
    return report


@dataclass
class TreeReport:
    n_max: int
    count_mismatches: list = field(default_factory=list)
    ode_residual: TruncatedSeries | None = None

    @property
    def passed(self) -> bool:
        return not self.count_mismatches and self.ode_residual is not None \
            and self.ode_residual.is_zero()


def _rooted(k: int) -> Fraction:
    return Fraction(k ** (k - 1), factorial(k))


def check_tree_identities(n_max: int, ode_order: int = 30) -> TreeReport:
    """Based-tree count identity for 2 <= n <= n_max and (1 - y) x y' - y = 0."""
    if n_max < 2:
        raise InvalidInput("check_tree_identities needs N >= 2")
    report = TreeReport(n_max)
    for n in range(2, n_max + 1):
        lhs = sum((_rooted(a) * _rooted(n - a) for a in range(1, n)), Fraction(0)) / 2
        rhs = Fraction((n - 1) * n ** (n - 2), factorial(n))
        if lhs != rhs:
            report.count_mismatches.append((n, lhs, rhs))
    y = TruncatedSeries.from_coeffs(
        [0] + [_rooted(k) for k in range(1, ode_order + 1)], order=ode_order + 1, var="x")
    report.ode_residual = (1 - y) * y.derivative().shift(1) - y
    return report
