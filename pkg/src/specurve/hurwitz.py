"""Simple Hurwitz numbers H_g(mu) with labeled poles.

``hurwitz_number`` solves the cut-and-join equation for its left-hand side,
memoised in a :class:`MemoStore`; evaluation runs on an explicit work stack so
the depth is bounded by memory, not by the interpreter's recursion limit.
``hurwitz_oracle`` counts monodromy tuples in S_d directly and shares no code
with the recursion.
"""

from __future__ import annotations

import os
import threading
from collections import defaultdict
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, NamedTuple

from .errors import BudgetExceeded, InvalidInput
from .exactcore import format_rational, parse_rational

__all__ = [
    "canonical_partition",
    "branch_count",
    "HurwitzKey",
    "MemoStore",
    "default_store",
    "hurwitz_number",
    "hurwitz_oracle",
    "ORACLE_MAX_DEGREE",
    "ORACLE_MAX_BRANCH",
]

ORACLE_MAX_DEGREE = 6
ORACLE_MAX_BRANCH = 8


def canonical_partition(mu: Iterable[int]) -> tuple[int, ...]:
    """Sorted (descending) copy of a pole-order vector, validated."""
    parts = tuple(int(m) for m in mu)
    if not parts:
        raise InvalidInput("pole-order vector mu must be nonempty")
    if any(m < 1 for m in parts):
        raise InvalidInput(f"pole orders must be positive, got {parts}")
    return tuple(sorted(parts, reverse=True))


def branch_count(g: int, mu: Iterable[int]) -> int:
    """Riemann-Hurwitz: number of simple branch points r = 2g - 2 + |mu| + len(mu)."""
    mu = tuple(mu)
    return 2 * g - 2 + sum(mu) + len(mu)


class HurwitzKey(NamedTuple):
    genus: int
    partition: tuple

    @classmethod
    def make(cls, g: int, mu: Iterable[int]) -> "HurwitzKey":
        if g < 0:
            raise InvalidInput(f"genus must be nonnegative, got {g}")
        return cls(int(g), canonical_partition(mu))

    @property
    def r(self) -> int:
        return branch_count(self.genus, self.partition)


class MemoStore:
    """Map from HurwitzKey to exact value, optionally mirrored in a text file.

    File records are ``H<TAB>g<TAB>mu=m1,m2,...<TAB>p/q`` with mu sorted
    descending; lines starting with ``#`` are comments. A bound key is never
    rebound to a different value. ``computed`` counts values produced by
    recursion (as opposed to loaded from disk).
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = os.fspath(path) if path is not None else None
        self._data: dict[HurwitzKey, Fraction] = {}
        self._lock = threading.Lock()
        self._dirty = False
        self.computed = 0
        if self.path and os.path.exists(self.path):
            self.load(self.path)

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data

    def get(self, key, default=None):
        return self._data.get(key, default)

    def bind(self, key: HurwitzKey, value: Fraction, computed: bool = True) -> None:
        with self._lock:
            old = self._data.get(key)
            if old is not None:
                if old != value:
                    raise InvalidInput(f"{key} already bound to {old}, refusing {value}")
                return
            self._data[key] = value
            self._dirty = True
            if computed:
                self.computed += 1

    def items(self):
        return sorted(self._data.items())

    @staticmethod
    def parse_line(line: str, lineno: int = 0, source: str = "<cache>"):
        fields = line.rstrip("\n").split("\t")
        where = f"{source}:{lineno}"
        if len(fields) != 4 or fields[0] != "H":
            raise InvalidInput(f"{where}: expected 'H<TAB>g<TAB>mu=...<TAB>p/q', got {line!r}")
        try:
            g = int(fields[1])
        except ValueError:
            raise InvalidInput(f"{where}: bad genus {fields[1]!r}") from None
        if not fields[2].startswith("mu="):
            raise InvalidInput(f"{where}: bad partition field {fields[2]!r}")
        try:
            mu = tuple(int(x) for x in fields[2][3:].split(","))
        except ValueError:
            raise InvalidInput(f"{where}: bad partition field {fields[2]!r}") from None
        key = HurwitzKey.make(g, mu)
        if key.partition != mu:
            raise InvalidInput(f"{where}: partition {mu} is not sorted descending")
        try:
            value = parse_rational(fields[3])
        except InvalidInput as exc:
            raise InvalidInput(f"{where}: {exc}") from None
        return key, value

    @staticmethod
    def format_line(key: HurwitzKey, value: Fraction) -> str:
        mu = ",".join(str(m) for m in key.partition)
        return f"H\t{key.genus}\tmu={mu}\t{format_rational(value)}\n"

    def load(self, path) -> int:
        n = 0
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip() or line.startswith("#"):
                    continue
                key, value = self.parse_line(line, lineno, os.fspath(path))
                self.bind(key, value, computed=False)
                n += 1
        self._dirty = False
        return n

    def flush(self, path=None) -> None:
        path = os.fspath(path) if path is not None else self.path
        if path is None:
            return
        with self._lock:
            lines = [self.format_line(k, v) for k, v in sorted(self._data.items())]
            tmp = f"{path}.tmp{os.getpid()}"
            with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("# simple Hurwitz numbers H_g(mu), labeled poles\n")
                fh.writelines(lines)
            os.replace(tmp, path)
            self._dirty = False


_DEFAULT = MemoStore()


def default_store() -> MemoStore:
    return _DEFAULT


def _cut_and_join_terms(key: HurwitzKey) -> dict:
    """Right-hand side of the cut-and-join equation, divided by r.

    Returns ``{tuple of keys: coefficient}``; each tuple is a product of one
    or two Hurwitz numbers, all with strictly fewer branch points.
    """
    g, mu = key
    r = key.r
    ell = len(mu)
    terms: dict = defaultdict(Fraction)
    for i, j in combinations(range(ell), 2):
        rest = [m for k, m in enumerate(mu) if k not in (i, j)]
        joined = HurwitzKey.make(g, rest + [mu[i] + mu[j]])
        terms[(joined,)] += mu[i] + mu[j]
    for i in range(ell):
        rest = mu[:i] + mu[i + 1:]
        for alpha in range(1, mu[i]):
            beta = mu[i] - alpha
            w = Fraction(alpha * beta, 2)
            if g >= 1:
                terms[(HurwitzKey.make(g - 1, rest + (alpha, beta)),)] += w
            idx = range(len(rest))
            for size in range(len(rest) + 1):
                for chosen in combinations(idx, size):
                    part_i = [rest[k] for k in chosen] + [alpha]
                    part_j = [rest[k] for k in idx if k not in chosen] + [beta]
                    for g1 in range(g + 1):
                        a = HurwitzKey.make(g1, part_i)
                        b = HurwitzKey.make(g - g1, part_j)
                        terms[tuple(sorted((a, b)))] += w
    return {k: c / r for k, c in terms.items() if c}


def hurwitz_number(g: int, mu: Iterable[int], store: MemoStore | None = None) -> Fraction:
    """H_g(mu) via cut-and-join, with base case H_0((1)) = 1."""
    store = _DEFAULT if store is None else store
    root = HurwitzKey.make(g, mu)
    cached = store.get(root)
    if cached is not None:
        return cached
    pending: dict[HurwitzKey, dict] = {}
    stack = [root]
    while stack:
        key = stack[-1]
        if key in store:
            stack.pop()
            continue
        if key.r == 0:
            # only (0, (1)) has r = 0
            store.bind(key, Fraction(1))
            stack.pop()
            continue
        terms = pending.get(key)
        if terms is None:
            terms = pending[key] = _cut_and_join_terms(key)
        missing = {k for prod in terms for k in prod if k not in store}
        if missing:
            stack.extend(sorted(missing))
            continue
        total = Fraction(0)
        for prod, c in terms.items():
            v = c
            for k in prod:
                v *= store.get(k)
                if not v:
                    break
            total += v
        store.bind(key, total)
        del pending[key]
        stack.pop()
    return store.get(root)


# ---------------------------------------------------------------------------
# monodromy oracle


def _compose(p: tuple, q: tuple) -> tuple:
    """(p q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def _inverse(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _merge(labels: tuple, a: int, b: int) -> tuple:
    la, lb = labels[a], labels[b]
    if la == lb:
        return labels
    lo, hi = min(la, lb), max(la, lb)
    return tuple(lo if x == hi else x for x in labels)


def _cycle_tuples(d: int, lengths: tuple) -> Iterable[list]:
    """Ordered tuples of pairwise disjoint cycles in S_d with the given lengths."""

    def rec(free: frozenset, k: int, acc: list):
        if k == len(lengths):
            yield list(acc)
            return
        m = lengths[k]
        for support in combinations(sorted(free), m):
            head, tail = support[0], support[1:]
            for order in permutations(tail):
                acc.append((head,) + order)
                yield from rec(free - set(support), k + 1, acc)
                acc.pop()

    yield from rec(frozenset(range(d)), 0, [])


def _cycle_perm(d: int, cycles: list) -> tuple:
    p = list(range(d))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            p[a] = b
    return tuple(p)


def hurwitz_oracle(g: int, mu: Iterable[int], max_degree: int = ORACLE_MAX_DEGREE,
                   max_branch: int = ORACLE_MAX_BRANCH) -> Fraction:
    """H_g(mu) = #{(tau_1..tau_r, c_1..c_l)} / (d! r!) by counting in S_d.

    The tau_k are transpositions, the c_i disjoint cycles of length mu_i, the
    full product is the identity and the generated group is transitive. The
    transposition words are grouped by (product, connectivity of supports),
    which counts the same set of tuples as listing them one by one.
    """
    mu = tuple(int(m) for m in mu)
    if not mu or any(m < 1 for m in mu) or g < 0:
        raise InvalidInput(f"invalid Hurwitz data g={g}, mu={mu}")
    d = sum(mu)
    r = branch_count(g, mu)
    if r < 0:
        return Fraction(0)
    if d > max_degree or r > max_branch:
        raise BudgetExceeded(
            f"oracle budget is |mu| <= {max_degree}, r <= {max_branch}; "
            f"(g={g}, mu={mu}) needs |mu| = {d}, r = {r}",
            required={"degree": d, "branch_points": r})
    transpositions = list(combinations(range(d), 2))
    identity = tuple(range(d))
    states = {(identity, identity): 1}
    for _ in range(r):
        nxt: dict = defaultdict(int)
        for (perm, labels), count in states.items():
            for a, b in transpositions:
                p = list(perm)
                # right-multiply by (a b)
                p[a], p[b] = perm[b], perm[a]
                nxt[(tuple(p), _merge(labels, a, b))] += count
        states = nxt
    by_product: dict = defaultdict(list)
    for (perm, labels), count in states.items():
        by_product[perm].append((labels, count))
    total = 0
    for cycles in _cycle_tuples(d, mu):
        target = _inverse(_cycle_perm(d, cycles))
        for labels, count in by_product.get(target, ()):
            merged = labels
            for cyc in cycles:
                for x in cyc[1:]:
                    merged = _merge(merged, cyc[0], x)
            if all(x == 0 for x in merged):
                total += count
    value = Fraction(total, factorial(d) * factorial(r))
    if total:
        # Riemann-Hurwitz: Euler characteristic of the cover
        chi = d * 2 - r - (d - len(mu))
        assert chi == 2 - 2 * g, (g, mu, chi)
    return value
