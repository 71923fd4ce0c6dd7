"""
Covering space with balls and with arbitrary bodies
===================================================

Two kinds of covering density enter the Hadwiger bounds: the density of the
best known lattice covering by balls, and Rogers' bound valid for every convex
body.
"""

from illum.covering import rogers_rn, theta_anstar, theta_best, theta_catalog

# %%
# The A_n* lattice is optimal up to n = 5; better lattices are known beyond.
print(" n   A_n* formula   catalog+5e-6   chosen")
for n in range(2, 14):
    a = theta_anstar(n).value.decimal_bounds(6)[1]
    c = theta_catalog(n).value.decimal_bounds(6)[1]
    best = theta_best(n)
    print(f"{n:2d}   {a:>12}   {c:>12}   {best.method}")

# %%
# Rogers: r_n <= min f_n(x), f_n(x) = (1+x)^n (1 - n ln x), over a grid on
# (0, 1/n).  Any grid point gives a valid upper bound.
for n in (3, 8, 14):
    rr = rogers_rn(n)
    print(f"r_{n} <= {rr.r_hi_ceiled()}  (minimizer j = {rr.best_j} of 1000)")
