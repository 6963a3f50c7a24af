"""Exact scalars, truncated Laurent series and linear differential operators.

Scalars are :class:`fractions.Fraction` throughout. A :class:`TruncatedSeries`
carries its own trusted range: coefficients are exact for every storage
exponent below ``order`` and are never reported at or above it. Series in
``1/x`` are stored over ``u = 1/x`` with ``inverted=True``; derivatives and
multiplication by powers of ``x`` are taken with respect to the outer variable
``x`` so that operators written in ``x`` apply unchanged.
"""

from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput

__all__ = [
    "ExactRational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "rational_to_json",
    "rational_from_json",
    "harmonic",
    "lcm_range",
    "double_factorial",
    "interval_precision",
    "TruncatedSeries",
    "DiffOperator",
    "series_exp",
    "apply_operator",
]

ExactRational = Fraction

INF = math.inf

_RATIONAL_RE = re.compile(r"^(-?\d+)/(\d+)$")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value) if "/" in value else Fraction(int(value))
    raise InvalidInput(f"not an exact rational: {value!r}")


def format_rational(q) -> str:
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise InvalidInput(f"malformed rational {text!r}, expected p/q")
    num, den = int(m.group(1)), int(m.group(2))
    if den == 0:
        raise InvalidInput(f"zero denominator in {text!r}")
    q = Fraction(num, den)
    if q.numerator != num or q.denominator != den:
        raise InvalidInput(f"rational {text!r} is not in lowest terms")
    return q


def rational_to_json(q) -> dict:
    q = as_rational(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rational_from_json(obj: dict) -> Fraction:
    return parse_rational(f"{obj['num']}/{obj['den']}")


def harmonic(m: int) -> Fraction:
    """The m-th harmonic number, with H_0 = 0."""
    if m < 0:
        raise InvalidInput("harmonic number index must be nonnegative")
    return sum((Fraction(1, k) for k in range(1, m + 1)), Fraction(0))


def lcm_range(n: int) -> int:
    """LCM of 1..n."""
    if n < 1:
        raise InvalidInput("lcm_range needs n >= 1")
    return math.lcm(*range(1, n + 1))


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1."""
    if n < -1:
        raise InvalidInput("double factorial undefined below -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@contextmanager
def interval_precision(bits: int):
    """Temporarily set the working precision of mpmath's interval context."""
    from mpmath import iv

    saved = iv.prec
    iv.prec = bits
    try:
        yield iv
    finally:
        iv.prec = saved


def _finite(order) -> bool:
    return order != INF


@dataclass(frozen=True)
class TruncatedSeries:
    """Laurent series with an explicit exclusive truncation order.

    ``coeffs[k]`` is the coefficient of the storage exponent ``low + k``.
    Storage exponents in ``[low + len(coeffs), order)`` are known zeros.
    ``order`` may be ``math.inf`` for an exact (polynomial) series.
    Instances are normalised: no leading or trailing zero coefficients, and
    the zero series has ``coeffs == ()`` and ``low == 0``.
    """

    coeffs: tuple
    low: int
    order: float
    var: str = "t"
    inverted: bool = False

    def __post_init__(self):
        cs = [as_rational(c) for c in self.coeffs]
        low = self.low
        if _finite(self.order):
            keep = max(0, int(self.order) - low)
            cs = cs[:keep]
        while cs and cs[-1] == 0:
            cs.pop()
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        cs = cs[start:]
        low = low + start if cs else 0
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "low", low)

    # construction -------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order=None, low: int = 0,
                    var: str = "t", inverted: bool = False) -> "TruncatedSeries":
        coeffs = tuple(coeffs)
        if order is None:
            order = low + len(coeffs)
        return cls(coeffs, low, order, var, inverted)

    @classmethod
    def polynomial(cls, coeffs: Sequence, var: str = "t") -> "TruncatedSeries":
        """An exact polynomial: coefficients of var**0, var**1, ..."""
        return cls(tuple(coeffs), 0, INF, var, False)

    @classmethod
    def zero(cls, order=INF, var: str = "t", inverted: bool = False):
        return cls((), 0, order, var, inverted)

    @classmethod
    def one(cls, order=INF, var: str = "t", inverted: bool = False):
        return cls((Fraction(1),), 0, order, var, inverted)

    @classmethod
    def monomial(cls, exponent: int, coeff=1, order=INF, var: str = "t",
                 inverted: bool = False):
        """coeff * var**exponent, where exponent is in the outer variable."""
        e = -exponent if inverted else exponent
        return cls((coeff,), e, order, var, inverted)

    # inspection ---------------------------------------------------------

    @property
    def valuation(self):
        """Lowest storage exponent that may be nonzero."""
        return self.low if self.coeffs else self.order

    def __getitem__(self, k: int) -> Fraction:
        if k >= self.order:
            raise IndexError(f"exponent {k} is beyond the trusted order {self.order}")
        i = k - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def coeff(self, exponent: int) -> Fraction:
        """Coefficient of ``var**exponent`` in the outer variable."""
        return self[-exponent if self.inverted else exponent]

    def items(self):
        """(storage exponent, coefficient) pairs for the nonzero coefficients."""
        return [(self.low + i, c) for i, c in enumerate(self.coeffs) if c]

    def is_zero(self) -> bool:
        """True when every trusted coefficient vanishes."""
        return not self.coeffs

    def first_nonzero(self):
        return (self.low, self.coeffs[0]) if self.coeffs else None

    def truncate(self, order) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, self.low, min(self.order, order),
                               self.var, self.inverted)

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Coefficientwise equality on the intersection of the trusted ranges."""
        self._check_compatible(other)
        return (self - other).is_zero()

    def __repr__(self):
        shown = ", ".join(f"{e}:{c}" for e, c in self.items()[:8])
        more = " ..." if len(self.coeffs) > 8 else ""
        name = f"1/{self.var}" if self.inverted else self.var
        return f"TruncatedSeries({name}; {{{shown}{more}}}; O({name}^{self.order}))"

    # arithmetic ---------------------------------------------------------

    def _check_compatible(self, other):
        if self.var != other.var or self.inverted != other.inverted:
            raise InvalidInput(
                f"series variables differ: {self.var!r}/{self.inverted} "
                f"vs {other.var!r}/{other.inverted}")

    def _like(self, coeffs, low, order):
        return TruncatedSeries(tuple(coeffs), low, order, self.var, self.inverted)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            return other
        return self._like((as_rational(other),), 0, INF)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        if not self.coeffs:
            return other.truncate(order)
        if not other.coeffs:
            return self.truncate(order)
        low = min(self.low, other.low)
        high = max(self.low + len(self.coeffs), other.low + len(other.coeffs))
        if _finite(order):
            high = min(high, int(order))
        out = [Fraction(0)] * max(0, high - low)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.low + i - low
                if k < len(out):
                    out[k] += c
        return self._like(out, low, order)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.low, self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "TruncatedSeries":
        c = as_rational(c)
        return self._like([c * a for a in self.coeffs], self.low, self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_compatible(other)
        order = min(self.order + other.valuation, other.order + self.valuation)
        if not self.coeffs or not other.coeffs:
            return self._like((), 0, order)
        low = self.low + other.low
        n = len(self.coeffs) + len(other.coeffs) - 1
        if _finite(order):
            n = min(n, int(order) - low)
        out = [Fraction(0)] * max(0, n)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(min(len(other.coeffs), n - i)):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return self._like(out, low, order)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return self.scale(1 / as_rational(other))

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out = self._like((Fraction(1),), 0, INF)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def reciprocal(self) -> "TruncatedSeries":
        """1/s; needs a nonzero leading coefficient inside the trusted range."""
        if not self.coeffs:
            raise InvalidInput("cannot invert a series with no trusted nonzero term")
        v = self.low
        lead = self.coeffs[0]
        if _finite(self.order):
            precision = int(self.order) - v
        else:
            if len(self.coeffs) == 1:
                return self._like((1 / lead,), -v, INF)
            raise InvalidInput("reciprocal of an exact non-monomial needs a truncation order")
        inv = [Fraction(0)] * precision
        inv[0] = 1 / lead
        for n in range(1, precision):
            acc = Fraction(0)
            for k in range(1, min(n, len(self.coeffs) - 1) + 1):
                acc += self.coeffs[k] * inv[n - k]
            inv[n] = -acc / lead
        return self._like(inv, -v, -v + precision)

    # calculus in the outer variable --------------------------------------

    def derivative(self) -> "TruncatedSeries":
        """d/d(var), with var the outer variable."""
        if self.inverted:
            # d/dx u^k = -k u^(k+1) for u = 1/x
            out = [-(self.low + i) * c for i, c in enumerate(self.coeffs)]
            return self._like(out, self.low + 1, self.order + 1)
        out = [(self.low + i) * c for i, c in enumerate(self.coeffs)]
        return self._like(out, self.low - 1, self.order - 1)

    def euler(self) -> "TruncatedSeries":
        """var * d/d(var); diagonal, so the trusted order is unchanged."""
        sign = -1 if self.inverted else 1
        out = [sign * (self.low + i) * c for i, c in enumerate(self.coeffs)]
        return self._like(out, self.low, self.order)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by var**k (outer variable)."""
        s = -k if self.inverted else k
        return self._like(self.coeffs, self.low + s, self.order + s)

    def mul_poly(self, poly: Sequence) -> "TruncatedSeries":
        """Multiply by the polynomial sum(poly[i] * var**i) in the outer variable."""
        out = None
        for i, c in enumerate(poly):
            c = as_rational(c)
            if c == 0:
                continue
            term = self.shift(i).scale(c)
            out = term if out is None else out + term
        if out is None:
            shifts = [self.order + (-i if self.inverted else i) for i in range(len(poly))]
            return self._like((), 0, min(shifts) if shifts else self.order)
        return out

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner) for a power series self (storage exponents >= 0) and
        an inner series with positive valuation."""
        if self.inverted or (self.coeffs and self.low < 0):
            raise InvalidInput("compose needs an ordinary power series on the outside")
        v = inner.valuation
        if v < 1:
            raise InvalidInput("inner series of a composition must have zero constant term")
        top = self.low + len(self.coeffs) - 1 if self.coeffs else -1
        result = TruncatedSeries((), 0, INF, inner.var, inner.inverted)
        for k in range(top, -1, -1):
            result = result * inner + self[k]
        cap = self.order * v if _finite(self.order) else INF
        return result.truncate(cap)


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """exp(s) for a series with zero constant term, by the recurrence n e_n = sum k s_k e_{n-k}."""
    if s.inverted:
        raise InvalidInput("series_exp works on ordinary power series")
    if s.coeffs and s.low < 1:
        raise InvalidInput("series_exp needs a zero constant term (no transcendental scalars)")
    order = s.order
    if not _finite(order):
        if s.coeffs:
            raise InvalidInput("exp of a nonzero exact polynomial needs a truncation order")
        return TruncatedSeries.one(INF, s.var)
    n_max = int(order)
    e = [Fraction(0)] * n_max
    if n_max:
        e[0] = Fraction(1)
    for n in range(1, n_max):
        acc = Fraction(0)
        for k in range(1, n + 1):
            sk = s[k]
            if sk:
                acc += k * sk * e[n - k]
        e[n] = acc / n
    return TruncatedSeries(tuple(e), 0, order, s.var, False)


@dataclass(frozen=True)
class DiffOperator:
    """sum_k c_k(var) * delta**k with delta = var*d/dvar (euler) or d/dvar.

    ``terms`` holds ``(coefficients of c_k in ascending powers, k)`` pairs.
    """

    terms: tuple
    var: str = "t"
    euler: bool = True

    @classmethod
    def from_terms(cls, terms, var: str = "t", euler: bool = True) -> "DiffOperator":
        norm = tuple((tuple(as_rational(c) for c in poly), int(k)) for poly, k in terms)
        return cls(norm, var, euler)

    def __call__(self, s: TruncatedSeries) -> TruncatedSeries:
        return apply_operator(self, s)


def apply_operator(op: DiffOperator, s: TruncatedSeries) -> TruncatedSeries:
    """Exact image of ``s`` under ``op``; the trusted order follows the series rules."""
    if op.var != s.var:
        raise InvalidInput(f"operator in {op.var!r} applied to a series in {s.var!r}")
    powers = {0: s}
    out = None
    for poly, k in op.terms:
        for j in range(1, k + 1):
            if j not in powers:
                prev = powers[j - 1]
                powers[j] = prev.euler() if op.euler else prev.derivative()
        term = powers[k].mul_poly(poly)
        out = term if out is None else out + term
    if out is None:
        return TruncatedSeries.zero(s.order, s.var, s.inverted)
    return out
