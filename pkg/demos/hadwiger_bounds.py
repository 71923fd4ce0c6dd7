"""
From quermassintegrals to an integer bound
==========================================

For a body in John's position, C(K, int K) is at most
theta(B^n) / |B^n| * sum_j binom(n, j) W_j(K).  We bound each W_j, print
the derivation and compare with the automatic plan search.
"""

from illum.covering import theta_best
from illum.geometry import BodyClass
from illum.hadwiger import assemble, auto_plan, best_bound, plan_general
from illum.meanwidth import simplex_mean_width

# %%
# Five-dimensional bodies, following the hand-chosen plan.
mw = simplex_mean_width(5)
plan = plan_general(5, mw)
bound = assemble(5, plan, theta_best(5))
print("\n".join(bound.plan_trace))
print("H_5 <=", bound.integer_bound)

# %%
# The automatic search tries every Bonnesen triple until nothing improves.
auto = auto_plan(5, BodyClass.GENERAL, mw)
print("auto plan sources:", auto.sources, "after", auto.iterations, "sweeps")
print("H_5 <= ", assemble(5, auto, theta_best(5)).integer_bound)

# %%
# In higher dimensions Rogers' bound takes over, and small dimensions use
# published constants.  best_bound picks the winner and says why.
for n, cls in [(3, BodyClass.GENERAL), (4, BodyClass.SYMMETRIC), (9, BodyClass.GENERAL)]:
    b = best_bound(n, cls)
    print(f"n={n} {cls.value:9s} -> {b.integer_bound:>9,}  ({b.plan_trace[-1]})")
