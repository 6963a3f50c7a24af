"""
Apery's sequences and the irrationality of zeta(3)
===================================================

Exact recursions and operators, then an interval-arithmetic look at how fast
B_n/A_n approaches zeta(3) and how that compares with the growth of d_n^3 A_n.
"""

from specurve.apery import (apery_closed, beukers_integral, irrationality_report,
                            mystery_lhs, ode_residuals, quantum_period)

# the sequences, and the binomial-sum formula for A_n
for n in range(6):
    A, B = apery_closed(n)
    print(n, A, B, mystery_lhs(n) == A)

# the generating functions satisfy their differential equations exactly
print("operator checks pass:", ode_residuals(30).passed)
print("quantum period:", [str(c) for c in quantum_period(6)])

# rigorous errors at 256 bits
rep = irrationality_report(40, 256)
print("zeta(3) in", rep.zeta3)
for n in (5, 10, 20, 30, 40):
    r = rep.row(n)
    print(f"n={n:2d}  error {float(r.error.mid):.3e}  scaled {float(r.scaled_error.mid):.5f}"
          f"  kappa {float(r.kappa.mid):.4f}")
print("kappa limit:", float(rep.kappa_limit.mid))

# the error decays like C^(-2n); compare the fitted and expected slopes
slope, expected = rep.error_fit
print(f"log error slope {slope:.4f}, expected {expected:.4f}")
print("A_n growth exponent in n (expected -3/2):", round(rep.growth_fit[0], 3))

# Beukers' integral for n = 0 is zeta(3)
b = beukers_integral(0)
print(f"Beukers n=0: {b.value:.9f}  relative error {b.relative_error:.1e}")
