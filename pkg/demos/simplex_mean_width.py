"""
How wide is a regular simplex?
==============================

The mean width of the unit-edge simplex T^n is an integral of
g(x) = 1 - F(x)^(n+1) - (1 - F(x))^(n+1), with F the normal CDF.  Because g
decreases, left and right Riemann sums bracket the integral.  Here we watch
the bracket tighten as N grows.
"""

import time

from illum.meanwidth import QuadratureParams, simplex_mean_widths

dims = [5, 6, 7, 8]

# %%
print(f"{'N':>9} " + " ".join(f"{'w(T^%d)' % n:>25}" for n in dims) + "   seconds")
for N in (1_000, 10_000, 100_000):
    t0 = time.perf_counter()
    res = simplex_mean_widths(dims, QuadratureParams(20, N))
    cols = " ".join("[{}, {}]".format(*res[n].width.decimal_bounds(8)).rjust(25) for n in dims)
    print(f"{N:>9} {cols}   {time.perf_counter() - t0:.1f}")

# %%
# The enclosure width shrinks like a/N: ten times more nodes buys one more
# certified digit.  The closed forms in low dimension give a sanity check:
# w(T^1) = 1/2 and w(T^2) = 3/(2 pi).
low = simplex_mean_widths([1, 2], QuadratureParams(20, 20_000))
print("w(T^1) in", low[1].width.decimal_bounds(6))
print("w(T^2) in", low[2].width.decimal_bounds(6), " (3/(2 pi) = 0.477465)")
