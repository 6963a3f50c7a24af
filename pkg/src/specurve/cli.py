"""Command-line front end: ``spectral-forge <command> [flags]``.

Exit status is 0 when every requested check passes, 1 when a check fails,
2 for invalid input or a refused computation, 3 for an internal consistency
failure. ``--json`` prints a single JSON document with sorted keys.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from itertools import product
from math import factorial

import mpmath

from . import __version__
from .apery import (apery_closed, beukers_integral, irrationality_report, mystery_lhs,
                    ode_residuals, quantum_period)
from .elsv import (assemble_H_poly, check_top_bottom, fit_hodge_polynomial,
                   polynomiality_check, xi_hat, xi_numeric_check)
from .errors import ConsistencyError, InvalidInput
from .exactcore import format_rational, rational_to_json
from .hurwitz import MemoStore, branch_count, hurwitz_number, hurwitz_oracle
from .intersections import (bg, bg_from_sine_series, lambda_g_integral,
                            lambda_g_recursion_check, psi_intersection)
from .lagrange import (catalan_numbers, catalan_z, check_catalan_curve,
                       check_tree_identities, lambert_inverse)
from .recursion_check import first_nonzero_monomial, main_recursion_residual

__all__ = ["main", "build_parser", "run", "BUDGETS"]

TOOL = "spectral-forge"

# per-suite sizes for `check`
BUDGETS = {
    "small": {"pairs": [(0, 3), (1, 1), (1, 2)], "recursion": [(0, 4), (1, 2)],
              "series_order": 20, "trees": 12, "apery_n": 20, "oracle_degree": 4,
              "oracle_branch": 6},
    "medium": {"pairs": [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)],
               "recursion": [(0, 4), (1, 2), (2, 1)], "series_order": 40, "trees": 30,
               "apery_n": 40, "oracle_degree": 4, "oracle_branch": 6},
    "large": {"pairs": [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)],
              "recursion": [(0, 4), (0, 5), (1, 2), (1, 3), (2, 1)], "series_order": 60,
              "trees": 60, "apery_n": 60, "oracle_degree": 5, "oracle_branch": 7},
}


class Outcome:
    """What a command produced: inputs, result, checks, CSV rows and plain text."""

    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.result: dict = {}
        self.checks: list = []
        self.header: list = []
        self.rows: list = []
        self.text: list = []

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append({"name": name, "pass": bool(ok), "detail": detail})

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)


def _ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _q(x) -> dict:
    return rational_to_json(x)


def _dec(x, digits: int = 30) -> str:
    """Decimal string of a point interval's lower endpoint."""
    return mpmath.nstr(mpmath.mp.make_mpf(x._mpi_[0]), digits)


def _up(x, digits: int = 6) -> str:
    return mpmath.nstr(mpmath.mp.make_mpf(x._mpi_[1]), digits)


def _interval(x) -> dict:
    """Enclosure as decimal midpoint plus an upper bound on the radius."""
    return {"mid": _dec(x.mid), "radius": _up(x.delta / 2)}


def _store(args) -> MemoStore:
    path = getattr(args, "cache", None) or os.environ.get("SPECURVE_CACHE") or None
    return MemoStore(path)


# ---------------------------------------------------------------------------
# commands


def cmd_hurwitz(args, store):
    mu = _ints(args.mu)
    out = Outcome("hurwitz", {"genus": args.genus, "mu": list(mu), "oracle": args.oracle})
    value = hurwitz_number(args.genus, mu, store)
    out.result = {"value": _q(value), "branch_points": branch_count(args.genus, mu)}
    out.header = ["genus", "mu", "value"]
    out.rows = [[args.genus, ",".join(map(str, mu)), format_rational(value)]]
    out.text = [format_rational(value)]
    if args.oracle:
        ref = hurwitz_oracle(args.genus, mu, args.max_degree, args.max_branch)
        out.result["oracle"] = _q(ref)
        out.check("oracle", ref == value, f"oracle {format_rational(ref)}")
    return out


def cmd_intersect(args, store):
    tau = _ints(args.tau)
    out = Outcome("intersect", {"genus": args.genus, "tau": list(tau)})
    value = psi_intersection(args.genus, tau)
    out.result = {"value": _q(value)}
    out.header = ["genus", "tau", "value"]
    out.rows = [[args.genus, ",".join(map(str, tau)), format_rational(value)]]
    out.text = [format_rational(value)]
    return out


def cmd_lambda_g(args, store):
    tau = _ints(args.tau)
    out = Outcome("lambda-g", {"genus": args.genus, "tau": list(tau)})
    value = lambda_g_integral(args.genus, tau)
    out.result = {"value": _q(value), "b_g": _q(bg(args.genus))}
    out.header = ["genus", "tau", "value"]
    out.rows = [[args.genus, ",".join(map(str, tau)), format_rational(value)]]
    out.text = [format_rational(value)]
    return out


def cmd_hodge(args, store):
    out = Outcome("hodge", {"genus": args.genus, "points": args.points})
    fit = fit_hodge_polynomial(args.genus, args.points, store)
    brackets = [{"n": list(k.n), "j": k.j, "value": _q(v)}
                for k, v in sorted(fit.brackets.items())]
    out.result = {"brackets": brackets}
    out.header = ["n", "j", "value"]
    for k, v in sorted(fit.brackets.items()):
        out.rows.append([",".join(map(str, k.n)), k.j, format_rational(v)])
        out.text.append(f"<tau_{{{','.join(map(str, k.n))}}} lambda_{k.j}> = "
                        f"{format_rational(v)}")
    return out


def cmd_xi(args, store):
    out = Outcome("xi", {"n": args.n})
    xi = xi_hat(args.n)
    out.result = {"coefficients": [_q(c) for c in xi.coeffs], "degree": xi.degree}
    out.header = ["power", "coefficient"]
    out.rows = [[k, format_rational(c)] for k, c in enumerate(xi.coeffs)]
    out.text = [" ".join(str(c) for c in xi.coeffs)]
    return out


def cmd_invert(args, store):
    out = Outcome("invert", {"order": args.order})
    y = lambert_inverse(args.order)
    coeffs = [y[k] for k in range(args.order + 1)]
    out.result = {"curve": "x = y exp(-y)", "coefficients": [_q(c) for c in coeffs]}
    out.header = ["power", "coefficient"]
    out.rows = [[k, format_rational(c)] for k, c in enumerate(coeffs)]
    out.text = [f"x^{k}: {format_rational(c)}" for k, c in enumerate(coeffs) if c]
    ok = all(coeffs[k] == Fraction(k ** (k - 1), factorial(k)) for k in range(1, len(coeffs)))
    out.check("lambert_closed_form", ok, "c_k = k^(k-1)/k!")
    return out


def cmd_catalan(args, store):
    out = Outcome("catalan", {"order": args.order})
    cat = catalan_numbers(args.order)
    z = catalan_z(2 * args.order - 1)
    from_z = [int(z.coeff(-(2 * m + 1))) for m in range(args.order)]
    out.result = {"catalan": [_q(c) for c in cat]}
    out.header = ["m", "C_m"]
    out.rows = [[m, format_rational(c)] for m, c in enumerate(cat)]
    out.text = [" ".join(map(str, cat))]
    out.check("z_coefficients", from_z == cat, "coefficients of z(x) in 1/x")
    return out


def cmd_apery(args, store):
    n = args.n
    out = Outcome("apery", {"n": n, "bits": args.bits, "report": args.report})
    A, B = apery_closed(n)
    out.result = {"A": _q(A), "B": _q(B), "mystery": _q(mystery_lhs(n))}
    out.header = ["n", "A_n", "B_n"]
    out.rows = [[n, format_rational(A), format_rational(B)]]
    out.text = [f"A_{n} = {A}", f"B_{n} = {format_rational(B)}"]
    out.check("mystery_formula", mystery_lhs(n) == A, "mystery sum equals A_n")
    if args.report:
        N = max(n, 10)
        rep = irrationality_report(N, args.bits)
        rows = []
        out.header = ["n", "A_n", "B_n", "gap_mid", "gap_radius", "error_mid",
                      "scaled_error_mid", "kappa_mid"]
        out.rows = []
        for r in rep.rows:
            rows.append({"n": r.n, "A": _q(r.A), "B": _q(r.B), "gap": _interval(r.gap),
                         "error": _interval(r.error), "scaled_error": _interval(r.scaled_error),
                         "kappa": _interval(r.kappa), "d3B_integral": r.d3B_integral})
            out.rows.append([r.n, format_rational(r.A), format_rational(r.B), _dec(r.gap.mid),
                             _up(r.gap.delta / 2), _dec(r.error.mid),
                             _dec(r.scaled_error.mid), _dec(r.kappa.mid)])
            out.text.append(f"n={r.n:3d}  gap={float(r.gap.mid):.6e}  "
                            f"error={float(r.error.mid):.6e}  kappa={float(r.kappa.mid):.6f}")
        out.result["report"] = {"C": _interval(rep.C), "zeta3": _interval(rep.zeta3),
                                "kappa_limit": _interval(rep.kappa_limit), "rows": rows,
                                "growth_fit_slope": repr(float(rep.growth_fit[0]))}
        _apery_invariants(out, rep)
    return out


def _apery_invariants(out: Outcome, rep) -> None:
    gaps = [r.gap for r in rep.rows]
    out.check("gap_positive", all(g.a > 0 for g in gaps), "interval lower ends")
    out.check("gap_decreasing", all(b.b < a.a for a, b in zip(gaps, gaps[1:])),
              "strict, interval-verified")
    scaled = [r.scaled_error for r in rep.rows if 15 <= r.n <= 35]
    ratios = [b / a for a, b in zip(scaled, scaled[1:])]
    if ratios:
        out.check("scaled_error_ratio", all(0.9 <= q.a and q.b <= 1.1 for q in ratios),
                  "15 <= n <= 35, within [0.9, 1.1]")
    out.check("kappa_above_one", all(r.kappa.a > 1 for r in rep.rows if r.n >= 5), "n >= 5")
    out.check("d3B_integral", all(r.d3B_integral for r in rep.rows), "exact divisibility")


# ---------------------------------------------------------------------------
# checks


def _check_catalan_curve(out, order):
    rep = check_catalan_curve(order)
    for name, res in rep.residuals.items():
        out.check(f"catalan_curve.{name}", res.is_zero(),
                  f"trusted below u^{res.order}")


def _check_trees(out, n_max, order):
    rep = check_tree_identities(n_max, order)
    out.check("trees.counts", not rep.count_mismatches, f"2 <= n <= {n_max}")
    out.check("trees.ode", rep.ode_residual.is_zero(), f"order {order}")


def _check_main_recursion(out, g, ell, store):
    res = main_recursion_residual(g, ell, store=store)
    mono = first_nonzero_monomial(res)
    detail = "zero residual" if mono is None else \
        f"first nonzero monomial t^{mono[0]} with coefficient {format_rational(mono[1])}"
    out.check(f"main_recursion({g},{ell})", res.is_zero(), detail)


def _check_top_bottom(out, g, ell, store):
    fit = fit_hodge_polynomial(g, ell, store)
    checks = check_top_bottom(g, ell, fit.brackets)
    bad = [c for c in checks if not c.passed]
    out.check(f"top_bottom({g},{ell})", not bad,
              f"{len(checks)} comparisons" + (f"; first failure {bad[0].name} at {bad[0].key}"
                                              if bad else ""))
    rows = polynomiality_check(fit, store=store)
    out.check(f"polynomiality({g},{ell})", all(p == a for _, p, a in rows),
              f"{len(rows)} off-grid points")
    H = assemble_H_poly(g, ell, fit.brackets)
    out.check(f"free_energy_shape({g},{ell})",
              H.poly.is_symmetric() and H.total_degree == 3 * (2 * g - 2 + ell)
              and H.lowest_degree == 2 * g - 3 + 2 * ell,
              "symmetric; degree bounds")


def _check_hurwitz(out, max_degree, max_branch, store):
    n = 0
    bad = []
    for d in range(1, max_degree + 1):
        for mu in _partitions(d):
            for g in range(0, max_branch):
                if branch_count(g, mu) > max_branch:
                    break
                n += 1
                if hurwitz_number(g, mu, store) != hurwitz_oracle(g, mu, max_degree, max_branch):
                    bad.append((g, mu))
    out.check("hurwitz_oracle", not bad, f"{n} cases" + (f"; mismatch {bad[0]}" if bad else ""))


def _partitions(d, largest=None):
    largest = d if largest is None else largest
    if d == 0:
        yield ()
        return
    for k in range(min(d, largest), 0, -1):
        for rest in _partitions(d - k, k):
            yield (k,) + rest


def _check_intersections(out):
    out.check("b_2_routes", bg(2) == bg_from_sine_series(2) == Fraction(7, 5760), "7/5760")
    ok = all(lambda_g_recursion_check(g, n).passed
             for g in range(1, 4) for ell in range(2, 4)
             for n in product(range(2 * g - 2 + ell), repeat=ell)
             if sum(n) == 2 * g - 3 + ell)
    out.check("lambda_g_recursion", ok, "1 <= g <= 3, 2 <= l <= 3")


def _check_apery(out, N):
    ok = all(apery_closed(n)[0] == mystery_lhs(n) for n in range(min(N, 20) + 1))
    out.check("apery.mystery", ok, f"n <= {min(N, 20)}")
    rep = ode_residuals(N)
    out.check("apery.ode", rep.passed, "; ".join(rep.failures) or f"order {N}")
    g = quantum_period(2)
    out.check("apery.quantum_period", g == [1, 0, 24], "gamma_0..2 = 1, 0, 24")
    _apery_invariants(out, irrationality_report(N, 256))
    b = beukers_integral(0)
    out.check("apery.beukers", b.relative_error < 1e-3, f"relative error {b.relative_error:.2e}")


def cmd_check(args, store):
    suite = args.suite
    out = Outcome("check", {"suite": suite, "budget": args.budget, "genus": args.genus,
                            "points": args.points, "order": args.order})
    budget = BUDGETS[args.budget]
    order = args.order or budget["series_order"]
    if suite == "catalan-curve":
        _check_catalan_curve(out, order)
    elif suite == "trees":
        _check_trees(out, budget["trees"], order)
    elif suite in ("main-recursion", "top-bottom"):
        if args.genus is None or args.points is None:
            raise InvalidInput(f"check {suite} needs --genus and --points")
        if suite == "main-recursion":
            _check_main_recursion(out, args.genus, args.points, store)
        else:
            _check_top_bottom(out, args.genus, args.points, store)
    else:
        _check_hurwitz(out, budget["oracle_degree"], budget["oracle_branch"], store)
        _check_catalan_curve(out, order)
        _check_trees(out, budget["trees"], order)
        for g, ell in budget["pairs"]:
            _check_top_bottom(out, g, ell, store)
        for g, ell in budget["recursion"]:
            _check_main_recursion(out, g, ell, store)
        # xi_hat raises on any violated coefficient law
        out.check("xi_structure", all(xi_hat(n).degree == 2 * n + 1 for n in range(31)),
                  "n <= 30")
        for n, t in ((0, 2), (1, 2), (0, 3)):
            r = xi_numeric_check(n, t)
            out.check(f"xi_numeric({n},{t})", r.passed and r.width < 1e-9,
                      f"width {r.width:.2e}")
        _check_intersections(out)
        _check_apery(out, budget["apery_n"])
    out.result = {"passed": out.passed, "count": len(out.checks)}
    out.header = ["name", "pass", "detail"]
    out.rows = [[c["name"], c["pass"], c["detail"]] for c in out.checks]
    out.text = [f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}"
                + (f": {c['detail']}" if c["detail"] else "") for c in out.checks]
    return out


COMMANDS = {
    "hurwitz": cmd_hurwitz,
    "intersect": cmd_intersect,
    "lambda-g": cmd_lambda_g,
    "hodge": cmd_hodge,
    "xi": cmd_xi,
    "invert": cmd_invert,
    "catalan": cmd_catalan,
    "apery": cmd_apery,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit one JSON document")
    fmt.add_argument("--csv", action="store_true", help="emit CSV with a header line")
    common.add_argument("--cache", metavar="PATH",
                        help="Hurwitz cache file (default: $SPECURVE_CACHE)")

    p = argparse.ArgumentParser(prog=TOOL, description="Exact enumerative recursions.")
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("hurwitz", parents=[common], help="simple Hurwitz number H_g(mu)")
    s.add_argument("--genus", type=_nonneg, required=True)
    s.add_argument("--mu", required=True, help="pole orders a,b,c")
    s.add_argument("--oracle", action="store_true", help="also run the monodromy count")
    s.add_argument("--max-degree", type=_positive, default=6)
    s.add_argument("--max-branch", type=_positive, default=8)

    for name, helptext in (("intersect", "psi-class intersection number"),
                           ("lambda-g", "lambda_g Hodge integral")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--genus", type=_nonneg, required=True)
        s.add_argument("--tau", required=True, help="indices n1,n2,...")

    s = sub.add_parser("hodge", parents=[common], help="Hodge brackets from Hurwitz numbers")
    s.add_argument("--genus", type=_nonneg, required=True)
    s.add_argument("--points", type=_positive, required=True)

    s = sub.add_parser("xi", parents=[common], help="coefficients of xi_hat_n")
    s.add_argument("--n", type=_nonneg, required=True)

    s = sub.add_parser("invert", parents=[common], help="invert x = y exp(-y)")
    s.add_argument("--order", type=_positive, default=10)

    s = sub.add_parser("catalan", parents=[common], help="Catalan numbers C_0..C_{N-1}")
    s.add_argument("--order", type=_positive, default=15)

    s = sub.add_parser("apery", parents=[common], help="Apery numbers and zeta(3) diagnostics")
    s.add_argument("--n", type=_nonneg, required=True)
    s.add_argument("--report", action="store_true")
    s.add_argument("--bits", type=_positive, default=256)

    s = sub.add_parser("check", parents=[common], help="run invariant suites")
    s.add_argument("suite", choices=["catalan-curve", "trees", "main-recursion",
                                     "top-bottom", "all"])
    s.add_argument("--genus", type=_nonneg)
    s.add_argument("--points", type=_positive)
    s.add_argument("--order", type=_positive)
    s.add_argument("--budget", choices=sorted(BUDGETS), default="small")
    return p


def render(out: Outcome, args) -> str:
    if args.json:
        doc = {"tool": TOOL, "version": __version__, "command": out.command,
               "inputs": out.inputs, "result": out.result, "checks": out.checks}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.header)
        w.writerows(out.rows)
        return buf.getvalue()
    lines = list(out.text)
    if out.command != "check":
        lines += [f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}: {c['detail']}"
                  for c in out.checks]
    return "\n".join(lines) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        store = _store(args)
        out = COMMANDS[args.command](args, store)
        if store.path:
            store.flush()
    except ConsistencyError as exc:
        print(f"{TOOL}: consistency failure: {exc}", file=stderr)
        return 3
    except InvalidInput as exc:
        print(f"{TOOL}: invalid input: {exc}", file=stderr)
        return 2
    stdout.write(render(out, args))
    return 0 if out.passed else 1


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
