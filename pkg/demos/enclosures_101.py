"""
Certified arithmetic in five minutes
====================================

Every number in illum is an interval that is guaranteed to contain the true
value.  This walk-through shows how the intervals behave.
"""

from fractions import Fraction

from illum.enclosure import Enclosure, erf_enclosure, pi_enclosure, std_normal_cdf

# %%
# A third cannot be stored in binary, so the enclosure brackets it by one unit
# in the last place on each side.
third = Enclosure(Fraction(1, 3))
print("1/3     ", third)
print("3 * 1/3 ", third * 3, "contains 1:", (third * 3).contains(1))

# %%
# Integers and dyadic fractions stay exact.
print("2 + 3   ", Enclosure(2) + Enclosure(3))

# %%
# pi comes from Machin's formula with explicit remainder bounds.  Raising the
# precision nests the enclosures.
for bits in (53, 128, 256):
    p = pi_enclosure(bits)
    print(f"pi @ {bits:3d} bits: width {float(p.width()):.2e}")

# %%
# erf uses its Maclaurin series up to 8 and Mills-ratio bounds beyond.
for x in (Fraction(1, 2), 1, 3, 9):
    print(f"erf({x}) in", erf_enclosure(Enclosure(x)).decimal_bounds(25))

# %%
# The standard normal CDF, the building block of the mean-width integrand.
print("F(1) in", std_normal_cdf(Enclosure(1)).decimal_bounds(15))
