"""Exact multivariate polynomials in t_1..t_n over the rationals.

A polynomial is a mapping from exponent tuples to nonzero Fractions. The
operations here are exactly those the free-energy machinery needs:
differentiation, variable remapping (embedding and diagonal substitution),
permutation and exact division by ``t_i - t_j``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Mapping, Sequence

from .errors import ConsistencyError, InvalidInput
from .exactcore import as_rational

__all__ = ["MultiPoly"]


class MultiPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise InvalidInput(f"exponent {exps} does not have {nvars} entries")
            c = as_rational(c)
            if c:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def univariate(cls, coeffs: Sequence, nvars: int = 1, i: int = 0) -> "MultiPoly":
        """sum(coeffs[k] * t_i**k) viewed in ``nvars`` variables."""
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * nvars
            e[i] = k
            terms[tuple(e)] = c
        return cls(nvars, terms)

    # basic protocol ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"MultiPoly({self.nvars}, 0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True)[:6]:
            mono = "*".join(f"t{i + 1}^{k}" for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        tail = " + ..." if len(self.terms) > 6 else ""
        return f"MultiPoly({self.nvars}, {' + '.join(parts)}{tail})"

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def lowest_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def full_support_part(self) -> "MultiPoly":
        """Terms in which every variable occurs (monomials divisible by t_1...t_n)."""
        return MultiPoly(self.nvars, {e: c for e, c in self.terms.items() if all(e)})

    def leading_monomial(self):
        """Largest exponent tuple in lexicographic order, with its coefficient."""
        if not self.terms:
            return None
        e = max(self.terms)
        return e, self.terms[e]

    # ring operations -----------------------------------------------------

    def _check(self, other):
        if other.nvars != self.nvars:
            raise InvalidInput(f"variable counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_rational(other)
            return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    # calculus and substitution -------------------------------------------

    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly(self.nvars, out)

    def mul_monomial(self, exps) -> "MultiPoly":
        return MultiPoly(self.nvars, {tuple(a + b for a, b in zip(e, exps)): c
                                      for e, c in self.terms.items()})

    def remap(self, targets: Sequence[int], nvars: int) -> "MultiPoly":
        """Send variable k to variable ``targets[k]`` of an ``nvars``-variable ring.

        Distinct targets embed; repeated targets multiply the variables together,
        which realises diagonal substitutions such as u1 = u2 = t_i.
        """
        if len(targets) != self.nvars:
            raise InvalidInput("remap needs one target per variable")
        out: dict = {}
        for e, c in self.terms.items():
            f = [0] * nvars
            for k, a in enumerate(e):
                f[targets[k]] += a
            f = tuple(f)
            out[f] = out.get(f, 0) + c
        return MultiPoly(nvars, out)

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Variable k becomes variable perm[k]."""
        return self.remap(perm, self.nvars)

    def is_symmetric(self) -> bool:
        if self.nvars < 2:
            return True
        for p in permutations(range(self.nvars)):
            if self.permute(p) != self:
                return False
        return True

    def substitute_equal(self, i: int, j: int) -> "MultiPoly":
        """Set t_i = t_j (the result still has nvars variables, t_i absent)."""
        targets = list(range(self.nvars))
        targets[i] = j
        return self.remap(targets, self.nvars)

    def divide_by_difference(self, i: int, j: int) -> "MultiPoly":
        """Exact quotient by (t_i - t_j); raises ConsistencyError on a nonzero remainder.

        Synthetic division in t_i with root t_j: writing P = sum_k p_k t_i^k,
        the quotient coefficients obey q_{k-1} = p_k + t_j q_k.
        """
        if i == j:
            raise InvalidInput("cannot divide by t_i - t_i")
        by_power: dict[int, MultiPoly] = {}
        for e, c in self.terms.items():
            f = list(e)
            k = f[i]
            f[i] = 0
            by_power.setdefault(k, MultiPoly(self.nvars))
            by_power[k] = by_power[k] + MultiPoly(self.nvars, {tuple(f): c})
        if not by_power:
            return MultiPoly(self.nvars)
        top = max(by_power)
        step = [0] * self.nvars
        step[j] = 1
        q_next = MultiPoly(self.nvars)
        quotient = MultiPoly(self.nvars)
        for k in range(top, 0, -1):
            q = by_power.get(k, MultiPoly(self.nvars)) + q_next.mul_monomial(step)
            e = [0] * self.nvars
            e[i] = k - 1
            quotient = quotient + q.mul_monomial(e)
            q_next = q
        remainder = by_power.get(0, MultiPoly(self.nvars)) + q_next.mul_monomial(step)
        if not remainder.is_zero():
            raise ConsistencyError(
                f"polynomial is not divisible by t{i + 1} - t{j + 1}; remainder {remainder}")
        return quotient

    def evaluate(self, point: Sequence) -> Fraction:
        pt = [as_rational(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, a in zip(pt, e):
                if a:
                    term *= x ** a
            total += term
        return total
