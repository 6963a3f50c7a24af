"""The Laplace-transformed cut-and-join recursion as a polynomial identity.

Free energies H_{g,l} are assembled from extracted Hodge brackets; the
recursion is then checked exactly in Q[t_1..t_l]. Only instances whose right
side references stable free energies are admitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable

from .elsv import assemble_H_poly, bracket_keys, extract_hodge_integrals, xi_hat
from .errors import ConsistencyError, Refusal
from .hurwitz import MemoStore
from .intersections import is_stable
from .multipoly import MultiPoly

__all__ = [
    "SECOND_LINE_FACTOR",
    "referenced_pairs",
    "check_admissible",
    "D_op",
    "RecursionInstance",
    "build_instance",
    "main_recursion_residual",
    "diagonal_numerator",
    "lhi_recursion_residual",
    "first_nonzero_monomial",
]

# The second line of the recursion carries the same 1/2 as the split sum;
# without it the (1,2) and (2,1) residuals are nonzero.
SECOND_LINE_FACTOR = Fraction(1, 2)


def _splits(g: int, others: tuple):
    """(g1, J, g2, K) with J + K = others and both factors stable (ordered pairs)."""
    idx = range(len(others))
    for size in range(len(others) + 1):
        for J in combinations(idx, size):
            K = tuple(k for k in idx if k not in J)
            for g1 in range(g + 1):
                g2 = g - g1
                if 2 * g1 - 1 + len(J) > 0 and 2 * g2 - 1 + len(K) > 0:
                    yield g1, tuple(others[k] for k in J), g2, tuple(others[k] for k in K)


def referenced_pairs(g: int, ell: int) -> list[tuple[int, int]]:
    """Every (g', l') whose free energy the right side of (g, l) uses."""
    refs = set()
    if ell >= 2:
        refs.add((g, ell - 1))
    if g >= 1:
        refs.add((g - 1, ell + 1))
    for g1, J, g2, K in _splits(g, tuple(range(ell - 1))):
        refs.add((g1, len(J) + 1))
        refs.add((g2, len(K) + 1))
    return sorted(refs)


def check_admissible(g: int, ell: int) -> None:
    if g < 0 or ell < 1 or not is_stable(g, ell):
        raise Refusal(f"(g, l) = ({g}, {ell}) is not a stable instance")
    bad = [p for p in referenced_pairs(g, ell) if not is_stable(*p)]
    if bad:
        names = ", ".join(f"H_{{{a},{b}}}" for a, b in bad)
        raise Refusal(f"(g, l) = ({g}, {ell}) references the unstable free energy {names}")


def D_op(P: MultiPoly, i: int) -> MultiPoly:
    """t_i^2 (t_i - 1) d/dt_i."""
    dP = P.diff(i)
    e3 = [0] * P.nvars
    e2 = [0] * P.nvars
    e3[i], e2[i] = 3, 2
    return dP.mul_monomial(e3) - dP.mul_monomial(e2)


@dataclass(frozen=True)
class RecursionInstance:
    genus: int
    points: int
    free_energies: dict  # (g', l') -> MultiPoly


def build_instance(g: int, ell: int, store: MemoStore | None = None,
                   extractor: Callable | None = None) -> RecursionInstance:
    check_admissible(g, ell)
    extractor = extractor or extract_hodge_integrals
    polys = {}
    for pair in [(g, ell)] + referenced_pairs(g, ell):
        if pair not in polys:
            polys[pair] = assemble_H_poly(*pair, extractor(*pair, store)).poly
    return RecursionInstance(g, ell, polys)


def _embed(P: MultiPoly, positions, nvars: int) -> MultiPoly:
    return P.remap(list(positions), nvars)


def diagonal_numerator(H_prev: MultiPoly, ell: int, i: int, j: int) -> MultiPoly:
    """t_i^2 (t_j - 1) D_i H(t without j) - t_j^2 (t_i - 1) D_j H(t without i)."""
    without_j = [k for k in range(ell) if k != j]
    without_i = [k for k in range(ell) if k != i]
    Ai = D_op(_embed(H_prev, without_j, ell), i)
    Aj = D_op(_embed(H_prev, without_i, ell), j)
    ei2, ej2 = [0] * ell, [0] * ell
    ei2[i], ej2[j] = 2, 2
    tj_minus_1 = MultiPoly.variable(ell, j) - 1
    ti_minus_1 = MultiPoly.variable(ell, i) - 1
    return Ai.mul_monomial(ei2) * tj_minus_1 - Aj.mul_monomial(ej2) * ti_minus_1


def _lhs(g: int, ell: int, H: MultiPoly) -> MultiPoly:
    out = H * (2 * g - 2 + ell)
    for i in range(ell):
        DH = D_op(H, i)
        e = [0] * ell
        e[i] = 1
        quotient = MultiPoly(ell)
        for exps, c in DH.terms.items():
            if exps[i] == 0:
                raise ConsistencyError(f"D_{i + 1} H is not divisible by t_{i + 1}")
            f = list(exps)
            f[i] -= 1
            quotient = quotient + MultiPoly(ell, {tuple(f): c})
        out = out + quotient
    return out


def main_recursion_residual(g: int, ell: int, instance: RecursionInstance | None = None,
                            store: MemoStore | None = None) -> MultiPoly:
    """LHS - RHS of the recursion for H_{g,l}; zero when the identity holds."""
    check_admissible(g, ell)
    inst = instance or build_instance(g, ell, store)
    F = inst.free_energies
    rhs = MultiPoly(ell)
    if ell >= 2:
        H_prev = F[(g, ell - 1)]
        for i, j in combinations(range(ell), 2):
            num = diagonal_numerator(H_prev, ell, i, j)
            if not num.substitute_equal(i, j).is_zero():
                raise ConsistencyError(f"numerator does not vanish on t{i + 1} = t{j + 1}")
            rhs = rhs + num.divide_by_difference(i, j)
    if g >= 1:
        H_up = F[(g - 1, ell + 1)]
        for i in range(ell):
            # variables of H_up: u1, u2, then the t's other than t_i
            P = D_op(D_op(H_up, 0), 1)
            targets = [i, i] + [k for k in range(ell) if k != i]
            rhs = rhs + P.remap(targets, ell) * SECOND_LINE_FACTOR
    for i in range(ell):
        others = tuple(k for k in range(ell) if k != i)
        for g1, J, g2, K in _splits(g, others):
            A = D_op(_embed(F[(g1, len(J) + 1)], (i,) + J, ell), i)
            B = D_op(_embed(F[(g2, len(K) + 1)], (i,) + K, ell), i)
            rhs = rhs + A * B * Fraction(1, 2)
    residual = _lhs(g, ell, F[(g, ell)]) - rhs
    if not residual.is_symmetric():
        raise ConsistencyError(f"residual for ({g}, {ell}) is not symmetric")
    return residual


# ---------------------------------------------------------------------------
# the same recursion in the bracket / xi_hat basis


def _signed(brackets: dict, g: int, ell: int) -> dict:
    """n (ordered) -> <tau_n Lambda_g^vee(1)>_{g,l} = sum_j (-1)^j <tau_n lambda_j>."""
    out: dict = {}
    for key in bracket_keys(g, ell):
        value = brackets.get(key, 0)
        if not value:
            continue
        for n in set(permutations(key.n)):
            out[n] = out.get(n, 0) + (-1) ** key.j * value
    return out


def _xi_product(factors: list[tuple[int, int]], nvars: int) -> MultiPoly:
    """prod xi_hat_m(t_k) over (m, k) pairs; repeated k multiply on the same variable."""
    out = MultiPoly.constant(nvars, 1)
    for m, k in factors:
        out = out * MultiPoly.univariate(xi_hat(m).coeffs, nvars, k)
    return out


def lhi_recursion_residual(g: int, ell: int, store: MemoStore | None = None,
                           extractor: Callable | None = None) -> MultiPoly:
    """The recursion rewritten as sums of brackets times xi_hat products."""
    check_admissible(g, ell)
    extractor = extractor or extract_hodge_integrals
    L = {pair: _signed(extractor(*pair, store), *pair)
         for pair in [(g, ell)] + referenced_pairs(g, ell)}
    lhs = MultiPoly(ell)
    for n, c in L[(g, ell)].items():
        base = _xi_product(list(zip(n, range(ell))), ell) * (2 * g - 2 + ell)
        lhs = lhs + base * c
        for i in range(ell):
            rest = [(n[k], k) for k in range(ell) if k != i]
            P = _xi_product([(n[i] + 1, i)] + rest, ell)
            e = [0] * ell
            e[i] = -1
            lhs = lhs + P.mul_monomial(e) * c
    rhs = MultiPoly(ell)
    if ell >= 2:
        for i, j in combinations(range(ell), 2):
            rest_idx = [k for k in range(ell) if k not in (i, j)]
            for n, c in L[(g, ell - 1)].items():
                m, rest = n[0], n[1:]
                outer = _xi_product(list(zip(rest, rest_idx)), ell)
                ti2, tj2 = [0] * ell, [0] * ell
                ti2[i], tj2[j] = 2, 2
                num = (_xi_product([(m + 1, i), (0, j)], ell).mul_monomial(ti2)
                       - _xi_product([(m + 1, j), (0, i)], ell).mul_monomial(tj2))
                rhs = rhs + outer * num.divide_by_difference(i, j) * c
    for i in range(ell):
        rest_idx = [k for k in range(ell) if k != i]
        coeff: dict = {}
        if g >= 1:
            for n, c in L[(g - 1, ell + 1)].items():
                k = (n[0], n[1], n[2:])
                coeff[k] = coeff.get(k, 0) + c
        for g1, J, g2, K in _splits(g, tuple(range(ell - 1))):
            for n1, c1 in L[(g1, len(J) + 1)].items():
                for n2, c2 in L[(g2, len(K) + 1)].items():
                    rest = [0] * (ell - 1)
                    for pos, v in zip(J, n1[1:]):
                        rest[pos] = v
                    for pos, v in zip(K, n2[1:]):
                        rest[pos] = v
                    k = (n1[0], n2[0], tuple(rest))
                    coeff[k] = coeff.get(k, 0) + c1 * c2
        for (a, b, rest), c in coeff.items():
            if c:
                P = _xi_product([(a + 1, i), (b + 1, i)] + list(zip(rest, rest_idx)), ell)
                rhs = rhs + P * (c * Fraction(1, 2))
    return lhs - rhs


def first_nonzero_monomial(P: MultiPoly):
    if P.is_zero():
        return None
    e = max(P.terms)
    return e, P.terms[e]
