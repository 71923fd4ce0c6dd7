import random
from fractions import Fraction

import pytest
from mpmath import mp

from illum.enclosure import Enclosure
from illum.geometry import simplex_volume_bound
from illum.meanwidth import (
    QuadratureParams,
    _integral_enclosures,
    g,
    riemann_enclosure,
    simplex_mean_width,
    simplex_mean_widths,
    simplex_Wn_minus_1,
    tail_upper,
)

SMALL = QuadratureParams(20, 4000)


def g_oracle(n1, x):
    with mp.workprec(512):
        F = mp.ncdf(x)
        return 1 - F**n1 - (1 - F) ** n1


# -- integrand and tail --------------------------------------------------------------

def test_g_at_zero():
    assert g(2, Enclosure(0)).contains(Fraction(1, 2))
    assert g(6, Enclosure(0)).contains(Fraction(31, 32))


def test_g_at_one():
    r = g(6, Enclosure(1))
    with mp.workprec(512):
        assert r.contains(g_oracle(6, 1))
    # 1 - F(1)^6 - (1 - F(1))^6 = 0.6453...
    assert Fraction("0.6452") < r.lo_fraction() and r.hi_fraction() < Fraction("0.6454")


def test_g_rejects_negative():
    with pytest.raises(ValueError):
        g(3, Enclosure(-1, 1))


def test_g_is_decreasing_on_ordered_pairs():
    rng = random.Random(7)
    for _ in range(1000):
        n1 = rng.randrange(2, 17)
        a, b = sorted(Fraction(rng.randrange(0, 20_000), 1000) for _ in range(2))
        if a == b:
            continue
        ga, gb = g(n1, Enclosure(a)), g(n1, Enclosure(b))
        slack = ga.width() + gb.width()
        assert ga.lo >= gb.hi - slack


def test_tail_examples():
    assert tail_upper(5, 20).hi <= 4.94e-9
    assert tail_upper(8, 40).hi <= 1.53e-17
    assert tail_upper(6, 30).hi < tail_upper(6, 25).hi


def test_tail_requires_cutoff_above_two():
    with pytest.raises(ValueError):
        tail_upper(5, 2)


def test_params_validation():
    with pytest.raises(ValueError):
        QuadratureParams(2, 10)
    with pytest.raises(ValueError):
        QuadratureParams(20, 0)
    assert QuadratureParams("41/2", 3).a == Fraction(41, 2)


# -- quadrature ------------------------------------------------------------------

def test_segment_integral_is_inverse_sqrt_pi():
    r = riemann_enclosure(1, QuadratureParams(20, 20_000))
    with mp.workprec(256):
        assert r.contains(1 / mp.sqrt(mp.pi))


def test_closed_form_widths():
    w1 = simplex_mean_width(1, QuadratureParams(20, 20_000)).width
    w2 = simplex_mean_width(2, QuadratureParams(20, 20_000)).width
    assert w1.contains(Fraction(1, 2))
    with mp.workprec(256):
        assert w2.contains(3 / (2 * mp.pi))
    assert w1.hi_fraction() - w1.lo_fraction() < Fraction(1, 10**3)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_sandwich_width(n):
    p = SMALL
    r = riemann_enclosure(n, p)
    assert r.lo <= r.hi
    bound = p.a / p.N + tail_upper(n, p.a).hi_fraction() + Fraction(p.N, 2**120)
    assert r.hi_fraction() - r.lo_fraction() <= bound


def test_refinement_monotonicity_small():
    prev = None
    for N in (250, 500, 1000, 2000, 4000):
        cur = simplex_mean_widths([5, 8], QuadratureParams(20, N))
        if prev is not None:
            for n in (5, 8):
                assert prev[n].integral.lo <= cur[n].integral.lo
                assert cur[n].integral.hi <= prev[n].integral.hi
        prev = cur


def test_table_and_direct_paths_agree():
    p = QuadratureParams(20, 3000)
    direct = _integral_enclosures([3, 6], p, 128, "direct")
    table = _integral_enclosures([3, 6], p, 128, "table")
    for n in (3, 6):
        assert direct[n].intersects(table[n])
        d = abs(direct[n].lo_fraction() - table[n].lo_fraction())
        assert d < Fraction(1, 10**30)


def test_batched_equals_single():
    both = simplex_mean_widths([5, 7], SMALL)
    assert both[7].width == simplex_mean_width(7, SMALL).width


def test_output_is_deterministic():
    a = simplex_mean_width(6, SMALL).width
    b = simplex_mean_width(6, SMALL).width
    assert a.raw == b.raw


def test_n5_inside_bracket_at_400k():
    w = simplex_mean_width(5, QuadratureParams(20, 400_000)).width
    assert Fraction("0.4208") <= w.lo_fraction() and w.hi_fraction() <= Fraction("0.4215")


# -- W_{n-1} ------------------------------------------------------------------------

def test_planar_Wn_minus_1_equals_W0():
    mw = simplex_mean_width(2, QuadratureParams(20, 20_000))
    assert simplex_Wn_minus_1(2, mw).intersects(simplex_volume_bound(2))


def test_W4_of_simplex_n5():
    mw = simplex_mean_width(5, QuadratureParams(20, 400_000))
    assert simplex_Wn_minus_1(5, mw).hi <= 17.19


def test_Wn_minus_1_scales_linearly():
    mw = simplex_mean_width(4, SMALL)
    base = simplex_Wn_minus_1(4, mw)
    doubled = type(mw)(mw.n, mw.params, mw.integral, mw.width * 2)
    # scaling by two is exact in binary, so the endpoints double exactly
    assert simplex_Wn_minus_1(4, doubled) == base * 2


def test_Wn_minus_1_dimension_mismatch():
    with pytest.raises(ValueError):
        simplex_Wn_minus_1(5, simplex_mean_width(4, SMALL))
