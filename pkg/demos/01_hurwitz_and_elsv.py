"""
Hurwitz numbers, Hodge integrals and the free energies
=======================================================

Counts covers of the sphere by cut-and-join, reads off Hodge integrals
from the polynomial structure in mu, and rebuilds the free energies H_{g,l}.
"""

from fractions import Fraction

from specurve.elsv import assemble_H_poly, extract_hodge_integrals, xi_hat
from specurve.hurwitz import MemoStore, hurwitz_number, hurwitz_oracle
from specurve.intersections import lambda_g_integral, psi_intersection
from specurve.recursion_check import main_recursion_residual

store = MemoStore()

# a few simple Hurwitz numbers, checked against brute-force monodromy counts
for g, mu in [(0, (1,)), (0, (2,)), (1, (2,)), (0, (2, 1)), (1, (3,))]:
    h = hurwitz_number(g, mu, store)
    print(f"H_{g}{list(mu)} = {h}   oracle agrees: {h == hurwitz_oracle(g, mu)}")

# one-part genus 0 numbers are d^(d-2)/d!
print([str(hurwitz_number(0, (d,), store)) for d in range(1, 7)])

# the Laplace kernels are polynomials in t
for n in range(4):
    print(f"xi_hat_{n}:", xi_hat(n).coeffs)

# Hodge integrals from H_g(mu); the j = 0 and j = g ones have closed forms
brackets = extract_hodge_integrals(2, 1, store)
for key, value in sorted(brackets.items()):
    print(f"<tau_{key.n[0]} lambda_{key.j}>_2,1 = {value}")
print("DVV:", psi_intersection(2, (4,)), "  lambda_g formula:", lambda_g_integral(2, (2,)))

# the free energy H_{1,1}(t) = (t - 1)^2 (t + 1) / 24
H = assemble_H_poly(1, 1, extract_hodge_integrals(1, 1, store))
print("H_{1,1} coefficients:", [str(H.poly.coefficient((k,))) for k in range(4)])
assert H.poly.coefficient((0,)) == Fraction(1, 24)

# and the recursion relating the free energies holds exactly
for g, ell in [(0, 4), (1, 2), (2, 1)]:
    print(f"main recursion ({g},{ell}) residual is zero:",
          main_recursion_residual(g, ell, store=store).is_zero())
