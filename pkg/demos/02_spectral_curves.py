"""
Catalan numbers, rooted trees and Lagrange inversion
=====================================================

The genus-0 data of the two simplest spectral curves, as exact series.
"""

from fractions import Fraction
from math import factorial

from specurve.exactcore import TruncatedSeries
from specurve.lagrange import (InvertibleGerm, catalan_numbers, check_catalan_curve,
                               check_tree_identities, lagrange_invert, lambert_inverse)

# Lambert curve x = y e^{-y}: its inverse counts rooted labelled trees
y = lambert_inverse(10)
print("y(x) =", [str(y[k]) for k in range(1, 11)])
print("k^(k-1)/k! =", [str(Fraction(k ** (k - 1), factorial(k))) for k in range(1, 11)])

# x = z + 1/z, written as w = u / (1 + w^2) with u = 1/x, w = 1/z
f = TruncatedSeries.from_coeffs([1, 0, 1], order=20, var="y")
w = lagrange_invert(InvertibleGerm(f, 19))
print("odd coefficients:", [int(w[2 * m + 1]) for m in range(10)])
print("Catalan numbers: ", catalan_numbers(10))

# the curve equation, the Picard-Fuchs equation and dF_{0,1}/dx + z all vanish
rep = check_catalan_curve(40)
for name, r in rep.residuals.items():
    print(f"{name:13s} zero: {r.is_zero()}   known below u^{r.order}")

# tree counting identity and the ODE (1 - y) x y' = y
trees = check_tree_identities(30, 30)
print("tree identities hold:", trees.passed)
