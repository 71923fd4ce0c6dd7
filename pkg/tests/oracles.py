"""Independent high-precision oracles shared by the test modules."""
import random
from fractions import Fraction

from mpmath import mp

from illum.enclosure import Enclosure, arith, elementary, erf_enclosure, std_normal_cdf

PREC = 128
ORACLE_PREC = 4 * PREC


def rational(rng, lo=-50, hi=50):
    den = rng.choice([1, 3, 7, 10, 1000, 999983, 2**40 + 1])
    return Fraction(rng.randrange(lo * den, hi * den), den)


def positive(rng, hi=50):
    den = rng.choice([1, 3, 7, 10, 1000, 999983])
    return Fraction(rng.randrange(1, hi * den), den)


def mpf_of(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


def truncates_to(e: Enclosure, digits: str) -> bool:
    """The enclosure lies in [d, d + one unit in the last printed place]."""
    d = Fraction(digits)
    unit = Fraction(1, 10 ** len(digits.split(".")[1]))
    return d <= e.lo_fraction() and e.hi_fraction() <= d + unit


def case(rng):
    """One random (operation, enclosure, oracle) triple."""
    kind = rng.choice(["add", "sub", "mul", "div", "exp", "ln", "sqrt", "pow_int", "pow_real",
                       "erf", "cdf"])
    if kind in ("add", "sub", "mul", "div"):
        a, b = rational(rng), rational(rng)
        if kind == "div" and b == 0:
            b = Fraction(1, 3)
        enc = arith(Enclosure(a), Enclosure(b), kind)
        fa, fb = mpf_of(a), mpf_of(b)
        val = {"add": mp.fadd, "sub": mp.fsub, "mul": mp.fmul, "div": mp.fdiv}[kind](fa, fb)
    elif kind == "exp":
        a = rational(rng, -40, 40)
        enc, val = elementary(Enclosure(a), "exp"), mp.exp(mpf_of(a))
    elif kind in ("ln", "sqrt"):
        a = positive(rng)
        enc = elementary(Enclosure(a), kind)
        val = mp.log(mpf_of(a)) if kind == "ln" else mp.sqrt(mpf_of(a))
    elif kind == "pow_int":
        a, k = rational(rng, -3, 3), rng.randrange(0, 15)
        enc, val = elementary(Enclosure(a), "pow_int", k), mpf_of(a) ** k
    elif kind == "pow_real":
        a, y = positive(rng, 5), rational(rng, -4, 4)
        enc, val = elementary(Enclosure(a), "pow_real", y), mp.power(mpf_of(a), mpf_of(y))
    elif kind == "erf":
        a = rational(rng, -12, 12)
        enc, val = erf_enclosure(Enclosure(a)), mp.erf(mpf_of(a))
    else:
        a = rational(rng, -14, 14)
        enc, val = std_normal_cdf(Enclosure(a)), mp.ncdf(mpf_of(a))
    return kind, a, enc, val


def containment_violations(rng: random.Random, count: int) -> list:
    """Random cases whose enclosure misses the 4x-precision oracle value."""
    bad = []
    with mp.workprec(ORACLE_PREC):
        for _ in range(count):
            kind, a, enc, val = case(rng)
            if not enc.contains(val):
                bad.append((kind, a, enc, val))
    return bad
