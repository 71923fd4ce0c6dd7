"""Certified mean width of the unit-edge regular simplex T^n.

The mean width (single-sided convention, the average of the support
function) is

    w(T^n) = Gamma(n/2) / (2 Gamma((n+1)/2)) * int_0^inf g_{n+1}(x) dx,
    g_{n+1}(x) = 1 - F(x)^(n+1) - (1 - F(x))^(n+1),

with F the standard normal CDF.  Because g_{n+1} is positive and decreasing on
[0, inf), right- and left-endpoint Riemann sums on [0, a] bracket the finite
part, and the tail beyond a >= 2 is at most (n+1) e^{-a} / sqrt(2 pi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from mpmath.libmp import from_rational, mpf_add

from .enclosure import (
    DEFAULT_PREC,
    ERF_SERIES_CUTOFF,
    Enclosure,
    check_prec,
    erf_enclosure,
    erf_guard_bits,
    erf_series_fixed,
    pi_enclosure,
    raw_to_fraction,
    std_normal_cdf,
    two_over_sqrt_pi,
)
from .geometry import ball_volume, check_dim, gamma_half_integer

DEFAULT_CUTOFF = Fraction(20)
DEFAULT_SUBDIVISIONS = 50_000
COROLLARY_SUBDIVISIONS = 1_000_000


@dataclass(frozen=True)
class QuadratureParams:
    """Cutoff ``a`` (exact rational, a > 2) and number of subintervals ``N``."""

    a: Fraction = DEFAULT_CUTOFF
    N: int = DEFAULT_SUBDIVISIONS

    def __post_init__(self):
        a = Fraction(self.a)
        object.__setattr__(self, "a", a)
        if a <= 2:
            raise ValueError(f"cutoff must exceed 2, got {a}")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"subdivision count must be a positive integer, got {self.N!r}")


@dataclass(frozen=True)
class MeanWidthResult:
    n: int
    params: QuadratureParams
    integral: Enclosure
    width: Enclosure


def g_from_cdf(n_plus_1: int, F: Enclosure) -> Enclosure:
    """g_{n+1} given an enclosure of F(x)."""
    P = F.pow_int(n_plus_1)
    Q = (1 - F).pow_int(n_plus_1)
    return (1 - P - Q).clamp(0, 1)


def g(n_plus_1: int, x: Enclosure, prec: int = DEFAULT_PREC) -> Enclosure:
    if x.lo < 0:
        raise ValueError("g is evaluated on [0, inf) only")
    return g_from_cdf(n_plus_1, std_normal_cdf(x, prec))


def tail_upper(n: int, a, prec: int = DEFAULT_PREC) -> Enclosure:
    """Enclosure of (n+1) e^{-a} / sqrt(2 pi), which bounds int_a^inf g_{n+1}."""
    a = Fraction(a)
    if a <= 2:
        raise ValueError("tail bound requires a > 2")
    ea = (-Enclosure(a, prec=prec)).exp()
    return ea * (n + 1) / (pi_enclosure(prec) * 2).sqrt()


def _enclosure_to_fixed(e: Enclosure, W: int) -> tuple[int, int]:
    lo, hi = e.raw
    lo_f = raw_to_fraction(lo) * (1 << W)
    hi_f = raw_to_fraction(hi) * (1 << W)
    return math.floor(lo_f), math.ceil(hi_f)


# anchors of the Taylor table sit at multiples of 2^-ANCHOR_BITS in z
ANCHOR_BITS = 7
# |H_m(x)| <= CRAMER_K 2^(m/2) sqrt(m!) e^(x^2/2) (Cramer's inequality)
CRAMER_K = Fraction(10865, 10000)


class _ErfTaylorTable:
    """Certified erf on [0, inf) from Taylor polynomials about dyadic anchors.

    At an anchor c the coefficients are erf(c) and
    erf^(j)(c) / j! = (2/sqrt pi) e^(-c^2) (-1)^(j-1) H_(j-1)(c) / j!,
    with the Hermite values exact rationals.  The truncation error after m
    terms is at most (2/sqrt pi) K 2^((m-1)/2) sqrt((m-1)!) d^m / m!, because
    e^(-xi^2) e^(xi^2/2) <= 1.  Everything is kept in fixed point with
    ``wp`` fractional bits.
    """

    def __init__(self, wp: int, prec: int):
        self.wp = wp
        self.prec = prec
        self.step_bits = wp - ANCHOR_BITS
        self.m, self.rem = self._order()
        self._coeffs: dict[int, tuple[list[int], list[int]]] = {}

    def _order(self) -> tuple[int, int]:
        # d < 2^-ANCHOR_BITS; 2/sqrt(pi) < 6/5
        m = 2
        while True:
            fact = math.factorial(m - 1)
            root = math.isqrt(2 ** (m - 1) * fact) + 1
            bound = Fraction(6, 5) * CRAMER_K * root / (m * fact * 2 ** (ANCHOR_BITS * m))
            scaled = bound * 2**self.wp
            if scaled < 1:
                return m, 1
            m += 1

    def coefficients(self, i: int) -> tuple[list[int], list[int]]:
        cached = self._coeffs.get(i)
        if cached is not None:
            return cached
        wp, m = self.wp, self.m
        scale = 1 << wp
        c = Enclosure(Fraction(i, 1 << ANCHOR_BITS), prec=wp + 16)
        e0 = erf_enclosure(c, wp + 16)
        K = two_over_sqrt_pi(wp + 16) * (-(c * c)).exp()
        lo = [math.floor(e0.lo_fraction() * scale)]
        hi = [math.ceil(e0.hi_fraction() * scale)]
        k_lo = math.floor(K.lo_fraction() * scale)
        k_hi = math.ceil(K.hi_fraction() * scale)
        # h_k = H_k(c) * 2^(ANCHOR_BITS k), exact integers
        h_prev, h = 0, 1
        s2 = 1 << (2 * ANCHOR_BITS)
        fact = 1
        for j in range(1, m):
            fact *= j
            q_num = h if j % 2 else -h
            q_den = fact << (ANCHOR_BITS * (j - 1))
            if q_num >= 0:
                lo.append(k_lo * q_num // q_den)
                hi.append(-(-k_hi * q_num // q_den))
            else:
                lo.append(k_hi * q_num // q_den)
                hi.append(-(-k_lo * q_num // q_den))
            h_prev, h = h, 2 * i * h - 2 * (j - 1) * s2 * h_prev
        self._coeffs[i] = (lo, hi)
        return lo, hi

    def erf(self, z_lo: int, z_hi: int) -> tuple[int, int]:
        """Bounds on erf over [z_lo, z_hi] * 2^-wp, in units of 2^-wp."""
        wp = self.wp
        i = z_lo >> self.step_bits
        d = z_lo - (i << self.step_bits)
        lo, hi = self.coefficients(i)
        v_lo, v_hi = lo[-1], hi[-1]
        for j in range(self.m - 2, -1, -1):
            v_lo = lo[j] + ((v_lo * d) >> wp)
            v_hi = hi[j] - ((-(v_hi * d)) >> wp)
        # erf is 2/sqrt(pi)-Lipschitz and z_hi - z_lo <= 1 unit
        return v_lo - self.rem, min(v_hi + self.rem + 2 * (z_hi - z_lo), 1 << wp)


def _isqrt_bracket(num: int, den: int, wp: int) -> tuple[int, int]:
    """Integers bracketing (num/den) / sqrt(2) * 2^wp."""
    q, r = divmod(num * num << (2 * wp - 1), den * den)
    z_lo = math.isqrt(q)
    return z_lo, z_lo if (r == 0 and z_lo * z_lo == q) else z_lo + 1


def _direct_cdf(W: int, prec: int):
    wc = prec + 40
    c_lo, c_hi = _enclosure_to_fixed(two_over_sqrt_pi(wc), wc)
    one = 1 << W

    def cdf(num: int, den: int) -> tuple[int, int]:
        if num == 0:
            return one >> 1, one >> 1
        zf = num / den / math.sqrt(2)
        if zf >= ERF_SERIES_CUTOFF - 1e-6:
            x = Enclosure(Fraction(num, den), prec=prec)
            return _enclosure_to_fixed(std_normal_cdf(x, prec), W)
        wp = erf_guard_bits(zf, prec)
        z_lo, z_hi = _isqrt_bracket(num, den, wp)
        s_lo, s_hi = erf_series_fixed(z_lo, z_hi, wp, prec)
        shift = wp + wc - W
        e_lo = (max(s_lo, 0) * c_lo) >> shift
        e_hi = -((-(s_hi * c_hi)) >> shift)
        return (one + e_lo) >> 1, min(-((-(one + e_hi)) >> 1), one)

    return cdf


def _table_cdf(W: int, prec: int):
    table = _ErfTaylorTable(W + 24, prec)
    wp = table.wp
    one = 1 << wp
    shift = wp - W + 1

    def cdf(num: int, den: int) -> tuple[int, int]:
        z_lo, z_hi = _isqrt_bracket(num, den, wp)
        e_lo, e_hi = table.erf(z_lo, z_hi)
        return (one + max(e_lo, 0)) >> shift, -((-(one + e_hi)) >> shift)

    return cdf


def _anchor_count(params: QuadratureParams) -> int:
    return math.ceil(float(params.a) / math.sqrt(2) * (1 << ANCHOR_BITS)) + 1


def _riemann_sums(ns: Iterable[int], params: QuadratureParams, prec: int, W: int, method: str = "auto"):
    """Exact integer sums of g bounds scaled by 2^W, per n.

    lower[n] = sum_{k=1}^{N} floor(g(ak/N) 2^W) lower bounds,
    upper[n] = sum_{k=0}^{N-1} ceil(g(ak/N) 2^W) upper bounds.
    The CDF is evaluated once per node and shared by every n; integer
    accumulation makes the sums exact and independent of evaluation order.
    ``method`` picks the CDF evaluator: "direct" (series per node), "table"
    (Taylor about anchors, cheaper once nodes outnumber anchors) or "auto".
    """
    if method == "auto":
        method = "table" if params.N >= 4 * _anchor_count(params) else "direct"
    if method not in ("direct", "table"):
        raise ValueError(f"unknown evaluation method {method!r}")
    cdf = _table_cdf(W, prec) if method == "table" else _direct_cdf(W, prec)
    ns = sorted(ns)
    exps = [n + 1 for n in ns]
    kmax = max(exps)
    N = params.N
    num, den = params.a.numerator, params.a.denominator * N
    one = 1 << W
    lower = dict.fromkeys(ns, 0)
    upper = dict.fromkeys(ns, 0)
    for k in range(N + 1):
        f_lo, f_hi = cdf(num * k, den)
        f_hi = min(f_hi, one)
        s_lo, s_hi = one - f_hi, one - f_lo
        p_lo = p_hi = q_lo = q_hi = one
        i = 0
        for e in range(1, kmax + 1):
            p_lo = (p_lo * f_lo) >> W
            p_hi = -((-(p_hi * f_hi)) >> W)
            q_lo = (q_lo * s_lo) >> W
            q_hi = -((-(q_hi * s_hi)) >> W)
            if e == exps[i]:
                n = ns[i]
                g_lo = max(one - p_hi - q_hi, 0)
                g_hi = min(one - p_lo - q_lo, one)
                if k >= 1:
                    lower[n] += g_lo
                if k < N:
                    upper[n] += g_hi
                i += 1
                if i == len(ns):
                    break
    return lower, upper


def _integral_enclosures(ns, params: QuadratureParams, prec: int, method: str = "auto") -> dict[int, Enclosure]:
    W = prec + 16
    lower, upper = _riemann_sums(ns, params, prec, W, method)
    a = params.a
    scale = a.denominator * params.N << W
    out = {}
    for n in lower:
        # (a/N) * sum * 2^-W, rounded once
        lo = from_rational(a.numerator * lower[n], scale, prec, "f")
        hi = from_rational(a.numerator * upper[n], scale, prec, "c")
        hi = mpf_add(hi, tail_upper(n, a, prec).raw[1], prec, "c")
        out[n] = Enclosure.from_raw(lo, hi, prec)
    return out


def riemann_enclosure(n: int, params: QuadratureParams = QuadratureParams(), prec: int = DEFAULT_PREC) -> Enclosure:
    """Enclosure of int_0^inf g_{n+1}(x) dx from endpoint Riemann sums plus the tail bound."""
    check_dim(n)
    check_prec(prec)
    return _integral_enclosures([n], params, prec)[n]


def gamma_ratio(n: int, prec: int = DEFAULT_PREC) -> Enclosure:
    """Gamma(n/2) / (2 Gamma((n+1)/2))."""
    return gamma_half_integer(n, prec) / (gamma_half_integer(n + 1, prec) * 2)


def simplex_mean_widths(
    ns: Iterable[int], params: QuadratureParams = QuadratureParams(), prec: int = DEFAULT_PREC
) -> dict[int, MeanWidthResult]:
    """Mean widths for several dimensions in one pass over the quadrature nodes."""
    ns = sorted(set(check_dim(n) for n in ns))
    check_prec(prec)
    integrals = _integral_enclosures(ns, params, prec)
    return {
        n: MeanWidthResult(n, params, integrals[n], gamma_ratio(n, prec) * integrals[n])
        for n in ns
    }


def simplex_mean_width(n: int, params: QuadratureParams = QuadratureParams(), prec: int = DEFAULT_PREC) -> MeanWidthResult:
    return simplex_mean_widths([n], params, prec)[n]


def simplex_Wn_minus_1(n: int, mw: MeanWidthResult, prec: int = DEFAULT_PREC) -> Enclosure:
    """W_{n-1} of the simplex circumscribed about B^n: |B^n| sqrt(2n(n+1)) w(T^n)."""
    if mw.n != n:
        raise ValueError(f"mean width computed for n={mw.n}, requested n={n}")
    return ball_volume(n, prec) * Enclosure(2 * n * (n + 1), prec=prec).sqrt() * mw.width
