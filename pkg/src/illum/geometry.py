"""Closed-form geometric constants: ball volumes, half-integer Gamma,
binomials, quermassintegrals of the circumscribed simplex and cube, and the
Steiner sum.

Combinatorial factors are exact Python integers or Fractions; each value is
turned into an enclosure only at the end, so the rounding error is confined to
powers of pi and at most one square root.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .enclosure import DEFAULT_PREC, Enclosure, check_prec, pi_enclosure, sqrt_pi

MAX_DIM = 64


class BodyClass(str, Enum):
    GENERAL = "general"
    SYMMETRIC = "symmetric"


def check_dim(n: int, lo: int = 1, hi: int = MAX_DIM) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or not lo <= n <= hi:
        raise ValueError(f"dimension must be an integer in [{lo}, {hi}], got {n!r}")
    return n


def binomial(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValueError(f"binomial requires 0 <= k <= n, got ({n}, {k})")
    return math.comb(n, k)


def _double_factorial_odd(n: int) -> int:
    """1 * 3 * 5 * ... * n for odd n."""
    return math.prod(range(1, n + 1, 2))


def gamma_half_integer(two_m: int, prec: int = DEFAULT_PREC) -> Enclosure:
    """Gamma(two_m / 2).

    Integer arguments give the exact point (k-1)!; half-integers use
    Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!).
    """
    check_prec(prec)
    if not isinstance(two_m, int) or two_m < 1:
        raise ValueError(f"two_m must be a positive integer, got {two_m!r}")
    if two_m % 2 == 0:
        return Enclosure(math.factorial(two_m // 2 - 1), prec=prec)
    k = (two_m - 1) // 2
    coef = Fraction(math.factorial(2 * k), 4**k * math.factorial(k))
    return sqrt_pi(prec) * coef


def _ball_volume_coefficient(n: int) -> tuple[Fraction, int]:
    """|B^n| = coef * pi^m; returns (coef, m)."""
    if n == 0:
        return Fraction(1), 0
    m = n // 2
    if n % 2 == 0:
        return Fraction(1, math.factorial(m)), m
    return Fraction(2 ** (m + 1), _double_factorial_odd(n)), m


def ball_volume(n: int, prec: int = DEFAULT_PREC) -> Enclosure:
    """Volume of the Euclidean unit ball, pi^(n/2) / Gamma(n/2 + 1)."""
    check_dim(n, 0)
    check_prec(prec)
    coef, m = _ball_volume_coefficient(n)
    return pi_enclosure(prec).pow_int(m) * coef


def simplex_volume_bound(n: int, prec: int = DEFAULT_PREC) -> Enclosure:
    """Volume of the regular simplex circumscribed about the unit ball,
    n^(n/2) (n+1)^((n+1)/2) / n!.
    """
    check_dim(n)
    check_prec(prec)
    # exactly one of n, n+1 is odd; pull a single square root out of it
    if n % 2 == 0:
        coef = Fraction(n ** (n // 2) * (n + 1) ** (n // 2), math.factorial(n))
        root = n + 1
    else:
        coef = Fraction(n ** ((n - 1) // 2) * (n + 1) ** ((n + 1) // 2), math.factorial(n))
        root = n
    return Enclosure(root, prec=prec).sqrt() * coef


def cube_constants(n: int, prec: int = DEFAULT_PREC) -> tuple[Enclosure, Enclosure]:
    """(W_0, W_{n-1}) of the cube [-1, 1]^n: 2^n and 2 |B^{n-1}|."""
    check_dim(n)
    return Enclosure(2**n, prec=prec), ball_volume(n - 1, prec) * 2


def steiner_sum(n: int, W: Sequence[Enclosure]) -> Enclosure:
    """sum_j binom(n, j) W_j, i.e. |K + B^n| given the quermassintegrals of K."""
    if len(W) != n + 1:
        raise ValueError(f"expected {n + 1} quermassintegrals, got {len(W)}")
    for w in W:
        if w.lo < 0:
            raise ValueError("quermassintegral bounds must be nonnegative")
    total = W[0] * binomial(n, 0)
    for j in range(1, n + 1):
        total = total + W[j] * binomial(n, j)
    return total
