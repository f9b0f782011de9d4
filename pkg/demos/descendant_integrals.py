"""
Descendant integrals on moduli of curves
========================================

Intersection numbers of psi classes, computed exactly by recursion.
"""

from fractions import Fraction

from gerbegw import psi_integral

# The two seeds
print(psi_integral(0, [0, 0, 0]), psi_integral(1, [1]))

# One-point numbers in each genus, against 1 / (24^g g!)
from math import factorial

for g in range(1, 6):
    v = psi_integral(g, [3 * g - 2])
    print(g, v, v == Fraction(1, 24 ** g * factorial(g)))

# String equation: inserting tau_0 lowers one exponent at a time
lhs = psi_integral(2, (0, 3, 3))
rhs = psi_integral(2, (2, 3)) + psi_integral(2, (3, 2))
print(lhs, rhs)

# Dilaton equation: inserting tau_1 multiplies by 2g - 2 + n
print(psi_integral(2, (1, 4)), 3 * psi_integral(2, (4,)))

# The same value by recursing on different marked points
print({psi_integral(3, (2, 3, 4), distinguished=i) for i in range(3)})
