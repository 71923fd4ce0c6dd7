"""Upper bounds on covering densities.

Three sources are available:

* the A_n* lattice formula for ball coverings (any n >= 2);
* a catalog of the least known lattice covering densities of space by balls
  for 2 <= n <= 13 (six-decimal records, padded by ``CATALOG_MARGIN``);
* Rogers' bound r_n = min_{0<x<1/n} (1+x)^n (1 - n ln x) on the covering
  density of any convex body, minimized over a uniform grid.
"""
from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from mpmath.libmp import mpf_lt

from .enclosure import DEFAULT_PREC, DomainError, Enclosure, ceil_decimal, check_prec
from .geometry import BodyClass, ball_volume, binomial, check_dim

DEFAULT_GRID = 1000

# six-decimal records are truncated, so every row is padded by this much
CATALOG_MARGIN = Fraction(5, 10**6)

# least known lattice covering densities of E^n by unit balls, as tabulated
# by Schurmann & Vallentin, Discrete Comput. Geom. 35 (2006)
DENSITY_CATALOG: dict[int, Fraction] = {
    2: Fraction("1.209199"),   # A_2* (optimal lattice)
    3: Fraction("1.463505"),   # A_3* (optimal lattice); printed record, formula gives 1.463503
    4: Fraction("1.765529"),   # A_4* (optimal lattice)
    5: Fraction("2.124286"),   # A_5* (optimal lattice)
    6: Fraction("2.464801"),   # Schurmann-Vallentin lattice L_6^c1
    7: Fraction("2.900024"),   # Schurmann-Vallentin lattice L_7^c
    8: Fraction("3.142202"),   # Schurmann-Vallentin lattice L_8^c
    9: Fraction("4.340185"),   # record lattice, below A_9* (4.388948)
    10: Fraction("5.251713"),  # A_10*
    11: Fraction("5.598338"),  # record lattice, below A_11* (6.281306)
    12: Fraction("7.510113"),  # A_12*
    13: Fraction("7.864060"),  # record lattice, below A_13* (8.976768)
}

# Fary: every planar convex body covers the plane with density at most 3/2
FARY_PLANAR = Fraction(3, 2)

OVERRIDE_ENV = "ILLUM_DENSITY_OVERRIDE"


class NotAvailableError(LookupError):
    """The requested bound has no source for this dimension."""


@dataclass(frozen=True)
class ThetaBound:
    n: int
    value: Enclosure
    method: str  # anstar | catalog | rogers | external


@dataclass(frozen=True)
class RogersResult:
    n: int
    grid_N: int
    best_j: int
    r: Enclosure

    def r_hi_ceiled(self, digits: int = 6) -> str:
        """Upper endpoint rounded up at ``digits`` decimals."""
        return ceil_decimal(self.r.hi_fraction(), digits)


def theta_anstar(n: int, prec: int = DEFAULT_PREC) -> ThetaBound:
    """Ball-covering density of the A_n* lattice:
    |B^n| sqrt(n+1) (n(n+2) / (12(n+1)))^(n/2).
    """
    check_dim(n, 2)
    check_prec(prec)
    q = Fraction(n * (n + 2), 12 * (n + 1))
    if n % 2 == 0:
        # sqrt(n+1) q^(n/2) with q^(n/2) rational
        factor = Enclosure(n + 1, prec=prec).sqrt() * (q ** (n // 2))
    else:
        # sqrt(n+1) sqrt(q) = sqrt(n(n+2)/12)
        factor = Enclosure(Fraction(n * (n + 2), 12), prec=prec).sqrt() * (q ** ((n - 1) // 2))
    return ThetaBound(n, ball_volume(n, prec) * factor, "anstar")


def load_density_overrides(path) -> dict[int, Fraction]:
    """Parse ``n value`` pairs, one per line; ``#`` starts a comment."""
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'n value', got {line!r}")
        n, value = int(parts[0]), Fraction(parts[1])
        if value < 1:
            raise ValueError(f"{path}:{lineno}: covering density must be >= 1")
        overrides[n] = value
    return overrides


def overrides_from_env(environ=None) -> dict[int, Fraction]:
    environ = os.environ if environ is None else environ
    path = environ.get(OVERRIDE_ENV)
    return load_density_overrides(path) if path else {}


def theta_catalog(n: int, prec: int = DEFAULT_PREC, overrides: dict[int, Fraction] | None = None) -> ThetaBound:
    table = dict(DENSITY_CATALOG)
    if overrides:
        table.update(overrides)
    if n not in table:
        raise NotAvailableError(f"no catalogued covering density for n={n}")
    return ThetaBound(n, Enclosure(1, table[n] + CATALOG_MARGIN, prec=prec), "catalog")


def theta_external(n: int, prec: int = DEFAULT_PREC) -> ThetaBound:
    if n != 2:
        raise NotAvailableError(f"no external covering density constant for n={n}")
    return ThetaBound(2, Enclosure(1, FARY_PLANAR, prec=prec), "external")


def theta_best(n: int, prec: int = DEFAULT_PREC, overrides: dict[int, Fraction] | None = None) -> ThetaBound:
    """Smallest certified upper bound on the ball-covering density theta(B^n)."""
    candidates = [theta_anstar(n, prec)]
    for source in (lambda: theta_catalog(n, prec, overrides), lambda: theta_external(n, prec)):
        try:
            candidates.append(source())
        except NotAvailableError:
            pass
    return min(candidates, key=lambda t: t.value.hi_fraction())


def rogers_f(n: int, x: Enclosure) -> Enclosure:
    """f_n(x) = (1+x)^n (1 - n ln x) on 0 < x < 1/n."""
    if not (x.lo > 0 and x.hi_fraction() < Fraction(1, n)):
        raise DomainError(f"rogers_f needs 0 < x < 1/{n}")
    return (1 + x).pow_int(n) * (1 - x.log() * n)


@functools.lru_cache(maxsize=None)
def rogers_rn(n: int, grid_N: int = DEFAULT_GRID, prec: int = DEFAULT_PREC) -> RogersResult:
    """Upper bound on r_n from f_n at the grid points j / (grid_N n), 1 <= j < grid_N."""
    check_dim(n, 2)
    check_prec(prec)
    if not isinstance(grid_N, int) or grid_N < 2:
        raise ValueError(f"grid size must be an integer >= 2, got {grid_N!r}")
    best_j, best_hi = None, None
    for j in range(1, grid_N):
        hi = rogers_f(n, Enclosure(Fraction(j, grid_N * n), prec=prec)).raw[1]
        if best_hi is None or mpf_lt(hi, best_hi):
            best_j, best_hi = j, hi
    # any grid value bounds the minimum from above; r_n >= 1 trivially
    r = Enclosure.from_raw(Enclosure(1, prec=prec).raw[0], best_hi, prec)
    return RogersResult(n, grid_N, best_j, r)


def hadwiger_multiplier(n: int, cls: BodyClass) -> int:
    """|K - K| / |K| bound: binom(2n, n) in general, 2^n for symmetric bodies."""
    return binomial(2 * n, n) if BodyClass(cls) is BodyClass.GENERAL else 2**n


def rogers_hadwiger(n: int, cls: BodyClass, prec: int = DEFAULT_PREC, grid_N: int = DEFAULT_GRID) -> int:
    """floor(binom(2n,n) r_n) (general) or floor(2^n r_n) (symmetric), on the certified r_n."""
    check_dim(n, 3)
    r = rogers_rn(n, grid_N, prec).r
    return (r * hadwiger_multiplier(n, cls)).floor_hi()
