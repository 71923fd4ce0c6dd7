"""Outward-rounded interval arithmetic over mpmath binary floats.

An :class:`Enclosure` holds two raw mpmath ``mpf`` tuples ``(lo, hi)`` and the
working precision in bits.  Every operation rounds the lower endpoint toward
-inf and the upper endpoint toward +inf, so if the true inputs lie inside the
operands, the true result lies inside the output.

The special functions needed downstream (pi, erf, the standard normal CDF) are
evaluated here with explicit truncation bounds rather than borrowed from a
general-purpose library.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from mpmath import mp
from mpmath.libmp import (
    MPZ,
    fone,
    fzero,
    from_float,
    from_int,
    from_man_exp,
    from_rational,
    mpf_add,
    mpf_div,
    mpf_exp,
    mpf_le,
    mpf_log,
    mpf_lt,
    mpf_mul,
    mpf_neg,
    mpf_pos,
    mpf_sign,
    mpf_sqrt,
    mpf_sub,
    to_int,
)

DEFAULT_PREC = 128
MIN_PREC = 53

# erf switches from the Maclaurin series to Mills-ratio bounds above this
ERF_SERIES_CUTOFF = 8

_ZERO = fzero
_ONE = fone
_HALF = from_man_exp(1, -1)


class DomainError(ValueError):
    """Raised when an operation is applied outside its mathematical domain."""


def check_prec(prec: int) -> int:
    if not isinstance(prec, int) or prec < MIN_PREC:
        raise ValueError(f"precision must be an integer >= {MIN_PREC} bits, got {prec!r}")
    return prec


def _to_raw(value, prec: int, rnd: str):
    """Round an exact scalar to a raw mpf in the given direction."""
    if isinstance(value, bool):
        raise TypeError("bool is not a numeric enclosure input")
    if isinstance(value, int):
        return from_int(value, prec, rnd)
    if isinstance(value, Fraction):
        return from_rational(value.numerator, value.denominator, prec, rnd)
    if isinstance(value, str):
        return _to_raw(Fraction(value), prec, rnd)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite input {value!r}")
        return from_float(value, prec, rnd)
    if hasattr(value, "_mpf_"):
        return mpf_pos(value._mpf_, prec, rnd)
    if isinstance(value, tuple):
        return mpf_pos(value, prec, rnd)
    raise TypeError(f"cannot build an enclosure from {type(value).__name__}")


def raw_to_fraction(raw) -> Fraction:
    """Exact rational value of a raw mpf tuple."""
    sign, man, exp, _ = raw
    if not man:
        if exp:
            raise DomainError("special float value has no rational form")
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _ulp(raw, prec: int):
    """A power of two at least one unit in the last place of ``raw``."""
    _, man, exp, bc = raw
    if not man:
        return from_man_exp(1, -prec - 64)
    return from_man_exp(1, exp + bc - prec)


def _widen_down(raw, prec: int, ulps: int = 2):
    return mpf_sub(raw, mpf_mul(_ulp(raw, prec), from_int(ulps)), prec, "f")


def _widen_up(raw, prec: int, ulps: int = 2):
    return mpf_add(raw, mpf_mul(_ulp(raw, prec), from_int(ulps)), prec, "c")


def _pow_down(base, k: int, prec: int):
    """Lower bound of base**k for base >= 0 by directed multiplication."""
    result, b = _ONE, base
    while k:
        if k & 1:
            result = mpf_mul(result, b, prec, "f")
        k >>= 1
        if k:
            b = mpf_mul(b, b, prec, "f")
    return result


def _pow_up(base, k: int, prec: int):
    result, b = _ONE, base
    while k:
        if k & 1:
            result = mpf_mul(result, b, prec, "c")
        k >>= 1
        if k:
            b = mpf_mul(b, b, prec, "c")
    return result


def _min(a, b):
    return a if mpf_le(a, b) else b


def _max(a, b):
    return b if mpf_le(a, b) else a


class Enclosure:
    """A closed interval ``[lo, hi]`` certified to contain some real quantity.

    Construct from exact scalars (``int``, ``Fraction``, decimal ``str``,
    ``float`` or ``mpf``); inexact conversions are rounded outward::

        >>> third = Enclosure(Fraction(1, 3))
        >>> third.contains(Fraction(1, 3))
        True

    Arithmetic with other enclosures or exact scalars works through the usual
    operators.  The result precision is the larger of the operands'.
    """

    __slots__ = ("_lo", "_hi", "_prec")

    def __init__(self, lo, hi=None, prec: int = DEFAULT_PREC):
        check_prec(prec)
        if hi is None:
            hi = lo
        rlo = _to_raw(lo, prec, "f")
        rhi = _to_raw(hi, prec, "c")
        if mpf_lt(rhi, rlo):
            raise ValueError("enclosure requires lo <= hi")
        object.__setattr__(self, "_lo", rlo)
        object.__setattr__(self, "_hi", rhi)
        object.__setattr__(self, "_prec", prec)

    @classmethod
    def from_raw(cls, lo, hi, prec: int) -> Enclosure:
        obj = object.__new__(cls)
        object.__setattr__(obj, "_lo", lo)
        object.__setattr__(obj, "_hi", hi)
        object.__setattr__(obj, "_prec", prec)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Enclosure is immutable")

    def __reduce__(self):
        return (Enclosure.from_raw, (self._lo, self._hi, self._prec))

    # -- accessors ---------------------------------------------------------

    @property
    def lo(self):
        return mp.make_mpf(self._lo)

    @property
    def hi(self):
        return mp.make_mpf(self._hi)

    @property
    def raw(self):
        return self._lo, self._hi

    @property
    def prec(self) -> int:
        return self._prec

    def lo_fraction(self) -> Fraction:
        return raw_to_fraction(self._lo)

    def hi_fraction(self) -> Fraction:
        return raw_to_fraction(self._hi)

    def is_point(self) -> bool:
        return self._lo == self._hi

    def width(self):
        """Upper bound on ``hi - lo``."""
        return mp.make_mpf(mpf_sub(self._hi, self._lo, self._prec, "c"))

    def mid(self):
        return mp.make_mpf(mpf_mul(mpf_add(self._lo, self._hi, self._prec + 2), _HALF))

    def contains(self, value) -> bool:
        """Exact membership test for a scalar or a sub-enclosure."""
        if isinstance(value, Enclosure):
            return mpf_le(self._lo, value._lo) and mpf_le(value._hi, self._hi)
        if isinstance(value, (int, Fraction, str, float)):
            v = Fraction(value)
            return self.lo_fraction() <= v <= self.hi_fraction()
        raw = value._mpf_ if hasattr(value, "_mpf_") else value
        return mpf_le(self._lo, raw) and mpf_le(raw, self._hi)

    def intersects(self, other: Enclosure) -> bool:
        return mpf_le(self._lo, other._hi) and mpf_le(other._lo, self._hi)

    def hull(self, other: Enclosure) -> Enclosure:
        return Enclosure.from_raw(
            _min(self._lo, other._lo), _max(self._hi, other._hi), max(self._prec, other._prec)
        )

    def clamp(self, lower, upper) -> Enclosure:
        """Intersect with ``[lower, upper]``; both bounds must be exactly representable."""
        rl = _to_raw(lower, self._prec, "f")
        ru = _to_raw(upper, self._prec, "c")
        lo = _min(_max(self._lo, rl), ru)
        hi = _max(_min(self._hi, ru), rl)
        return Enclosure.from_raw(lo, hi, self._prec)

    def with_prec(self, prec: int) -> Enclosure:
        """Re-round the endpoints (outward) to another precision."""
        check_prec(prec)
        return Enclosure.from_raw(mpf_pos(self._lo, prec, "f"), mpf_pos(self._hi, prec, "c"), prec)

    def floor_hi(self) -> int:
        return int(to_int(self._hi, "f"))

    def decimal_bounds(self, digits: int = 6) -> tuple[str, str]:
        """Decimal strings with lo rounded down and hi rounded up at ``digits`` places."""
        return floor_decimal(self.lo_fraction(), digits), ceil_decimal(self.hi_fraction(), digits)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Enclosure:
        if isinstance(other, Enclosure):
            return other
        return Enclosure(other, prec=self._prec)

    def __add__(self, other):
        o = self._coerce(other)
        p = max(self._prec, o._prec)
        return Enclosure.from_raw(
            mpf_add(self._lo, o._lo, p, "f"), mpf_add(self._hi, o._hi, p, "c"), p
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        p = max(self._prec, o._prec)
        return Enclosure.from_raw(
            mpf_sub(self._lo, o._hi, p, "f"), mpf_sub(self._hi, o._lo, p, "c"), p
        )

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Enclosure.from_raw(mpf_neg(self._hi), mpf_neg(self._lo), self._prec)

    def __mul__(self, other):
        o = self._coerce(other)
        p = max(self._prec, o._prec)
        a, b, c, d = self._lo, self._hi, o._lo, o._hi
        if mpf_sign(a) >= 0 and mpf_sign(c) >= 0:
            return Enclosure.from_raw(mpf_mul(a, c, p, "f"), mpf_mul(b, d, p, "c"), p)
        pairs = ((a, c), (a, d), (b, c), (b, d))
        lo = hi = None
        for x, y in pairs:
            l = mpf_mul(x, y, p, "f")
            h = mpf_mul(x, y, p, "c")
            lo = l if lo is None else _min(lo, l)
            hi = h if hi is None else _max(hi, h)
        return Enclosure.from_raw(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        p = max(self._prec, o._prec)
        c, d = o._lo, o._hi
        if mpf_sign(c) <= 0 <= mpf_sign(d):
            raise DomainError("division by an enclosure containing 0")
        if mpf_sign(d) < 0:
            return -(self / (-o))
        a, b = self._lo, self._hi
        if mpf_sign(a) >= 0:
            return Enclosure.from_raw(mpf_div(a, d, p, "f"), mpf_div(b, c, p, "c"), p)
        if mpf_sign(b) <= 0:
            return Enclosure.from_raw(mpf_div(a, c, p, "f"), mpf_div(b, d, p, "c"), p)
        return Enclosure.from_raw(mpf_div(a, c, p, "f"), mpf_div(b, c, p, "c"), p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k):
        if isinstance(k, int) and not isinstance(k, bool):
            return self.pow_int(k)
        return self.pow_real(k)

    def pow_int(self, k: int) -> Enclosure:
        if k < 0:
            return 1 / self.pow_int(-k)
        p = self._prec
        if k == 0:
            return Enclosure.from_raw(_ONE, _ONE, p)
        lo, hi = self._lo, self._hi
        if mpf_sign(lo) >= 0:
            return Enclosure.from_raw(_pow_down(lo, k, p), _pow_up(hi, k, p), p)
        if mpf_sign(hi) <= 0:
            m = Enclosure.from_raw(mpf_neg(hi), mpf_neg(lo), p).pow_int(k)
            return m if k % 2 == 0 else -m
        # interval straddles zero
        if k % 2 == 0:
            top = _max(_pow_up(mpf_neg(lo), k, p), _pow_up(hi, k, p))
            return Enclosure.from_raw(_ZERO, top, p)
        return Enclosure.from_raw(mpf_neg(_pow_up(mpf_neg(lo), k, p)), _pow_up(hi, k, p), p)

    def sqrt(self) -> Enclosure:
        if mpf_sign(self._lo) < 0:
            raise DomainError("sqrt of an enclosure with negative lower endpoint")
        p = self._prec
        return Enclosure.from_raw(mpf_sqrt(self._lo, p, "f"), mpf_sqrt(self._hi, p, "c"), p)

    def exp(self) -> Enclosure:
        p = self._prec
        lo = _ONE if self._lo == _ZERO else _max(_widen_down(mpf_exp(self._lo, p, "f"), p), _ZERO)
        hi = _ONE if self._hi == _ZERO else _widen_up(mpf_exp(self._hi, p, "c"), p)
        return Enclosure.from_raw(lo, hi, p)

    def log(self) -> Enclosure:
        if mpf_sign(self._lo) <= 0:
            raise DomainError("log of an enclosure that is not strictly positive")
        p = self._prec
        lo = _ZERO if self._lo == _ONE else _widen_down(mpf_log(self._lo, p, "f"), p)
        hi = _ZERO if self._hi == _ONE else _widen_up(mpf_log(self._hi, p, "c"), p)
        return Enclosure.from_raw(lo, hi, p)

    def pow_real(self, y) -> Enclosure:
        if mpf_sign(self._lo) <= 0:
            raise DomainError("real power requires a strictly positive base")
        return (self.log() * self._coerce(y)).exp()

    # -- comparisons & display ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Enclosure):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __hash__(self):
        return hash((self._lo, self._hi))

    def __repr__(self):
        lo, hi = self.decimal_bounds(20)
        return f"Enclosure([{lo}, {hi}], prec={self._prec})"


def point(value, prec: int = DEFAULT_PREC) -> Enclosure:
    return Enclosure(value, prec=prec)


def floor_decimal(value: Fraction, digits: int) -> str:
    scaled = math.floor(value * 10**digits)
    return _format_scaled(scaled, digits)


def ceil_decimal(value: Fraction, digits: int) -> str:
    scaled = math.ceil(value * 10**digits)
    return _format_scaled(scaled, digits)


def _format_scaled(scaled: int, digits: int) -> str:
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


# -- generic entry points ------------------------------------------------------

_ARITH = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def arith(x: Enclosure, y: Enclosure, op: str) -> Enclosure:
    try:
        return _ARITH[op](x, y)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def elementary(x: Enclosure, f: str, arg=None) -> Enclosure:
    """Apply ``exp``, ``ln``, ``sqrt``, ``pow_int`` or ``pow_real`` (exponent in ``arg``)."""
    if f == "exp":
        return x.exp()
    if f == "ln":
        return x.log()
    if f == "sqrt":
        return x.sqrt()
    if f == "pow_int":
        return x.pow_int(arg)
    if f == "pow_real":
        return x.pow_real(arg)
    raise ValueError(f"unknown function {f!r}")


# -- constants -----------------------------------------------------------------

def _atan_inv_bounds(m: int, wp: int) -> tuple[int, int]:
    """Integers lo, hi with lo <= 2**wp * arctan(1/m) <= hi."""
    one = MPZ(1) << wp
    lo = hi = MPZ(0)
    k = 0
    denom = MPZ(m)
    m2 = MPZ(m) * m
    while True:
        d = (2 * k + 1) * denom
        t_lo = one // d
        t_hi = -((-one) // d)
        if k % 2 == 0:
            lo += t_lo
            hi += t_hi
        else:
            lo -= t_hi
            hi -= t_lo
        if t_hi <= 1:
            break
        k += 1
        denom *= m2
    # alternating series with decreasing terms: |remainder| <= next term <= 1
    return lo - 1, hi + 1


@lru_cache(maxsize=32)
def pi_enclosure(prec: int = DEFAULT_PREC) -> Enclosure:
    """Certified enclosure of pi from Machin's formula 16 atan(1/5) - 4 atan(1/239)."""
    check_prec(prec)
    wp = prec + 24
    a_lo, a_hi = _atan_inv_bounds(5, wp)
    b_lo, b_hi = _atan_inv_bounds(239, wp)
    lo = 16 * a_lo - 4 * b_hi
    hi = 16 * a_hi - 4 * b_lo
    return Enclosure.from_raw(
        from_man_exp(lo, -wp, prec, "f"), from_man_exp(hi, -wp, prec, "c"), prec
    )


@lru_cache(maxsize=32)
def sqrt_pi(prec: int = DEFAULT_PREC) -> Enclosure:
    return pi_enclosure(prec).sqrt()


@lru_cache(maxsize=32)
def two_over_sqrt_pi(prec: int) -> Enclosure:
    return 2 / sqrt_pi(prec)


@lru_cache(maxsize=32)
def _inv_sqrt2(prec: int) -> Enclosure:
    return 1 / Enclosure(2, prec=prec).sqrt()


# -- error function --------------------------------------------------------------

def erf_guard_bits(z: float, prec: int) -> int:
    """Working bits for the Maclaurin series at |z|: cancellation costs about
    log2(e) z^2 bits, and small z needs extra absolute resolution."""
    extra = max(0, -math.frexp(z)[1]) if z > 0 else 0
    return prec + int(1.45 * z * z) + extra + 32


def erf_series_fixed(z_lo: int, z_hi: int, wp: int, prec: int) -> tuple[int, int]:
    """Bound S(z) = sum_k (-1)^k z^(2k+1) / (k! (2k+1)) over z in [z_lo, z_hi] * 2^-wp.

    Requires 0 <= z_lo <= z_hi and z <= 8.  Returns integers ``lo, hi`` with
    ``lo * 2**-wp <= S(z) <= hi * 2**-wp`` for every z in the interval.  The
    lower sequence runs at z_lo rounded down and the upper at z_hi rounded
    up; since every term grows with z, pairing even terms of one with odd
    terms of the other bounds S on the whole interval.  The series is cut
    once terms decrease monotonically and the first omitted term is below the
    target resolution (alternating-series remainder).
    """
    if z_hi <= 0:
        return 0, 0
    one = MPZ(1) << wp
    z2_lo = (z_lo * z_lo) >> wp
    z2_hi = -((-(z_hi * z_hi)) >> wp)
    threshold = (min(max(z_lo, 1), one) >> (prec + 8)) + 1
    t_lo, t_hi = MPZ(z_lo), MPZ(z_hi)
    s_lo, s_hi = t_lo, t_hi
    k = 0
    while True:
        k += 1
        t_lo = ((t_lo * z2_lo) >> wp) // k
        t_hi = -((((-(t_hi * z2_hi)) >> wp)) // k)
        d = 2 * k + 1
        term_lo = t_lo // d
        term_hi = -((-t_hi) // d)
        if k & 1:
            s_lo -= term_hi
            s_hi -= term_lo
        else:
            s_lo += term_lo
            s_hi += term_hi
        # terms t_m/(2m+1) decrease for every m >= k once k >= z^2
        if (k << wp) >= z2_hi and term_hi <= threshold:
            break
    nxt = -((((-(t_hi * z2_hi)) >> wp)) // (k + 1))
    rem = -((-nxt) // (2 * k + 3)) + 1
    return s_lo - rem, s_hi + rem


def _erf_series_sum(raw, prec: int) -> tuple[int, int, int]:
    """Series bounds at a point 0 <= z <= 8 given as a raw mpf; returns (lo, hi, wp)."""
    _, man, exp, _ = raw
    if not man:
        return 0, 0, 0
    wp = erf_guard_bits(float(mp.make_mpf(raw)), prec)
    shift = exp + wp
    man = MPZ(man)
    if shift >= 0:
        z_lo = z_hi = man << shift
    else:
        z_lo = man >> -shift
        z_hi = -((-man) >> -shift)
    lo, hi = erf_series_fixed(z_lo, z_hi, wp, prec)
    return lo, hi, wp


def _erf_point(raw, prec: int) -> tuple:
    """Raw (lo, hi) bounds of erf at a point 0 <= z."""
    if not raw[1]:
        return _ZERO, _ZERO
    if mpf_le(raw, from_int(ERF_SERIES_CUTOFF)):
        s_lo, s_hi, wp = _erf_series_sum(raw, prec)
        c = two_over_sqrt_pi(prec)
        lo = mpf_mul(from_man_exp(s_lo, -wp, prec, "f"), c._lo, prec, "f")
        hi = mpf_mul(from_man_exp(s_hi, -wp, prec, "c"), c._hi, prec, "c")
        return _max(lo, _ZERO), _min(hi, _ONE)
    erfc = _erfc_mills(Enclosure.from_raw(raw, raw, prec))
    return _max(mpf_sub(_ONE, erfc._hi, prec, "f"), _ZERO), _min(mpf_sub(_ONE, erfc._lo, prec, "c"), _ONE)


def _erfc_mills(z: Enclosure) -> Enclosure:
    """erfc(z) for z > 0 from the Mills-ratio bounds on the normal tail.

    With x = z*sqrt(2):  x/(1+x^2) phi(x) <= 1-F(x) <= phi(x)/x, and
    erfc(z) = 2(1-F(x)), which gives
    e^{-z^2}/(z sqrt(pi)) * 2z^2/(1+2z^2) <= erfc(z) <= e^{-z^2}/(z sqrt(pi)).
    """
    p = z.prec
    z2 = z.pow_int(2)
    upper = (-z2).exp() / (z * sqrt_pi(p))
    ratio = (2 * z2) / (1 + 2 * z2)
    lower = upper * ratio
    return Enclosure.from_raw(lower._lo, upper._hi, p)


# derivative of erf is at most 2/sqrt(pi) < 6/5
_ERF_LIPSCHITZ = from_rational(6, 5, 64, "c")


def _erf_nonneg(lo_raw, hi_raw, prec: int) -> tuple:
    if lo_raw == hi_raw:
        return _erf_point(lo_raw, prec)
    width = mpf_sub(hi_raw, lo_raw, prec, "c")
    if mpf_lt(width, from_man_exp(1, -32)):
        lo, hi = _erf_point(lo_raw, prec)
        hi = mpf_add(hi, mpf_mul(width, _ERF_LIPSCHITZ, prec, "c"), prec, "c")
        return lo, _min(hi, _ONE)
    return _erf_point(lo_raw, prec)[0], _erf_point(hi_raw, prec)[1]


def erf_enclosure(x: Enclosure, prec: int | None = None) -> Enclosure:
    """Certified enclosure of erf over ``x``.

    Uses the alternating Maclaurin series for ``|x| <= 8`` and Mills-ratio
    bounds beyond.  Odd symmetry is exact: ``erf(-x)`` mirrors ``erf(x)``.
    """
    p = check_prec(prec if prec is not None else x.prec)
    if x.prec != p:
        x = x.with_prec(p)
    lo, hi = x._lo, x._hi
    if mpf_sign(lo) >= 0:
        r_lo, r_hi = _erf_nonneg(lo, hi, p)
        return Enclosure.from_raw(r_lo, r_hi, p)
    if mpf_sign(hi) <= 0:
        r_lo, r_hi = _erf_nonneg(mpf_neg(hi), mpf_neg(lo), p)
        return Enclosure.from_raw(mpf_neg(r_hi), mpf_neg(r_lo), p)
    neg_hi = _erf_point(mpf_neg(lo), p)[1]
    pos_hi = _erf_point(hi, p)[1]
    return Enclosure.from_raw(mpf_neg(neg_hi), pos_hi, p)


def std_normal_cdf(x: Enclosure, prec: int | None = None) -> Enclosure:
    """Enclosure of F(x) = 1/2 + erf(x / sqrt 2) / 2, clamped to [0, 1]."""
    p = check_prec(prec if prec is not None else x.prec)
    if x.prec != p:
        x = x.with_prec(p)
    e = erf_enclosure(x * _inv_sqrt2(p), p)
    lo = mpf_mul(mpf_add(_ONE, e._lo, p, "f"), _HALF)
    hi = mpf_mul(mpf_add(_ONE, e._hi, p, "c"), _HALF)
    return Enclosure.from_raw(_max(lo, _ZERO), _min(hi, _ONE), p)
