"""Upper bounds on C(K, int K) through covering K by translates of its John
ellipsoid.

With K in John's position (unit ball as the maximal inscribed ellipsoid),

    C(K, int K) <= theta(B^n) / |B^n| * sum_j binom(n, j) W_j(K),

so the work is bounding each quermassintegral W_j(K).  The anchors are the
extremal bodies of John's position (regular simplex for general bodies, cube
for symmetric ones) for W_0 and W_{n-1}, the exact value W_n = |B^n|, and the
Bokowski-Heil inequality for the middle indices with the John outer radius
R = n (general) or sqrt(n) (symmetric).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath.libmp import mpf_lt, mpf_sub, from_man_exp

from .covering import (
    DEFAULT_GRID,
    ThetaBound,
    hadwiger_multiplier,
    rogers_rn,
    theta_best,
)
from .enclosure import DEFAULT_PREC, Enclosure, ceil_decimal, check_prec
from .geometry import (
    BodyClass,
    ball_volume,
    check_dim,
    cube_constants,
    simplex_volume_bound,
    steiner_sum,
)
from .meanwidth import (
    MeanWidthResult,
    QuadratureParams,
    simplex_mean_widths,
    simplex_Wn_minus_1,
)

# per-dimension recipes: indices bounded by the volume, and middle indices
# j -> (i, k) bounded by the Bokowski-Heil inequality
GENERAL_PLANS = {
    5: ((0, 1, 2), {3: (2, 4)}),
    6: ((0, 1, 2, 3), {4: (3, 5)}),
    7: ((0, 1, 2, 3), {4: (3, 6), 5: (3, 6)}),
    8: ((0, 1, 2, 3, 4), {5: (4, 7), 6: (4, 7)}),
}
SYMMETRIC_PLANS = {
    4: ((0, 1), {2: (1, 3)}),
    5: ((0, 1, 2), {3: (2, 4)}),
    6: ((0, 1, 2), {3: (2, 5), 4: (2, 5)}),
}

# previously published bounds for dimensions without a computed plan
EXTERNAL_BOUNDS = {
    (3, BodyClass.GENERAL): (14, "Prymak, SIAM J. Discrete Math. 37 (2023)"),
    (4, BodyClass.GENERAL): (96, "Prymak & Shepelska, J. Geom. 111 (2020)"),
    (3, BodyClass.SYMMETRIC): (8, "Lassak, J. London Math. Soc. 30 (1984)"),
}

# retry the floor at higher precision when hi is this close to an integer
NEAR_INTEGER = Fraction(1, 2**20)


class UnsupportedPlanError(ValueError):
    """No John-ellipsoid plan exists for this (dimension, class)."""


@dataclass(frozen=True)
class QuermassEntry:
    bound: Enclosure
    source: str  # volume | meanwidth | exact_ball | bonnesen(i,k)


@dataclass(frozen=True)
class QuermassBounds:
    n: int
    cls: BodyClass
    R: Enclosure
    W: tuple[QuermassEntry, ...]
    plan: str = "paper"
    iterations: int = 0

    @property
    def sources(self) -> list[str]:
        return [e.source for e in self.W]

    @property
    def bounds(self) -> list[Enclosure]:
        return [e.bound for e in self.W]


@dataclass(frozen=True)
class HadwigerBound:
    n: int
    cls: BodyClass
    real_bound: Enclosure
    integer_bound: int
    theta_used: ThetaBound | None
    plan_trace: tuple[str, ...] = field(default=())
    method: str = "john"


def outer_radius(n: int, cls: BodyClass, prec: int = DEFAULT_PREC) -> Enclosure:
    """Radius of a ball centred at the origin containing every body in John's position."""
    if BodyClass(cls) is BodyClass.GENERAL:
        return Enclosure(n, prec=prec)
    return Enclosure(n, prec=prec).sqrt()


def bonnesen(n: int, R: Enclosure, i: int, j: int, k: int, Wi: Enclosure, Wk: Enclosure,
             prec: int = DEFAULT_PREC) -> Enclosure:
    """Bokowski-Heil bound on W_j from W_i and W_k for a body inside R B^n:

        ((k-j)(i+1) R^i W_i + (j-i)(k+1) R^k W_k) / ((k-i)(j+1) R^j)

    evaluated as (k-j)(i+1) W_i R^(i-j) + (j-i)(k+1) W_k R^(k-j), over (k-i)(j+1),
    which is the same expression with R appearing once per term.
    """
    if not 0 <= i < j < k <= n:
        raise ValueError(f"Bonnesen indices need 0 <= i < j < k <= n, got ({i}, {j}, {k}) with n={n}")
    if not R.lo > 0:
        raise ValueError("outer radius must be positive")
    R = R.with_prec(max(R.prec, prec))
    left = Wi * ((k - j) * (i + 1)) / R.pow_int(j - i)
    right = Wk * ((j - i) * (k + 1)) * R.pow_int(k - j)
    return (left + right) / ((k - i) * (j + 1))


def _volume_anchor(n: int, cls: BodyClass, prec: int) -> Enclosure:
    if BodyClass(cls) is BodyClass.GENERAL:
        return simplex_volume_bound(n, prec)
    return cube_constants(n, prec)[0]


def _meanwidth_anchor(n: int, cls: BodyClass, mw: MeanWidthResult | None, prec: int) -> Enclosure:
    if BodyClass(cls) is BodyClass.GENERAL:
        if mw is None:
            raise ValueError("general bodies need a simplex mean-width result")
        return simplex_Wn_minus_1(n, mw, prec)
    return cube_constants(n, prec)[1]


def _build_plan(n: int, cls: BodyClass, recipe, mw: MeanWidthResult | None, prec: int) -> QuermassBounds:
    volume_idx, middle = recipe
    R = outer_radius(n, cls, prec)
    W: list[QuermassEntry | None] = [None] * (n + 1)
    V = _volume_anchor(n, cls, prec)
    for i in volume_idx:
        W[i] = QuermassEntry(V, "volume")
    W[n - 1] = QuermassEntry(_meanwidth_anchor(n, cls, mw, prec), "meanwidth")
    W[n] = QuermassEntry(ball_volume(n, prec), "exact_ball")
    for j in sorted(middle):
        i, k = middle[j]
        b = bonnesen(n, R, i, j, k, W[i].bound, W[k].bound, prec)
        W[j] = QuermassEntry(b, f"bonnesen({i},{k})")
    assert all(e is not None for e in W), "plan leaves an index unbounded"
    return QuermassBounds(n, BodyClass(cls), R, tuple(W), "paper")


def plan_general(n: int, mw: MeanWidthResult, prec: int = DEFAULT_PREC) -> QuermassBounds:
    if n not in GENERAL_PLANS:
        raise UnsupportedPlanError(f"no general-body plan for n={n} (supported: 5-8)")
    if mw.n != n:
        raise ValueError(f"mean width computed for n={mw.n}, requested n={n}")
    return _build_plan(n, BodyClass.GENERAL, GENERAL_PLANS[n], mw, prec)


def plan_symmetric(n: int, prec: int = DEFAULT_PREC) -> QuermassBounds:
    if n not in SYMMETRIC_PLANS:
        raise UnsupportedPlanError(f"no symmetric-body plan for n={n} (supported: 4-6)")
    return _build_plan(n, BodyClass.SYMMETRIC, SYMMETRIC_PLANS[n], None, prec)


def auto_plan(n: int, cls: BodyClass, mw: MeanWidthResult | None = None,
              prec: int = DEFAULT_PREC) -> QuermassBounds:
    """Search every admissible Bonnesen triple, iterating to a fixpoint.

    Starts from the volume bound on every index below n-1, the mean-width
    bound at n-1 and the exact ball at n, then repeatedly replaces W_j by the
    smallest Bonnesen bound over all i < j < k.  Bounds only decrease, and an
    improvement must exceed a few units in the last place to count.
    """
    cls = BodyClass(cls)
    check_dim(n, 2)
    R = outer_radius(n, cls, prec)
    V = _volume_anchor(n, cls, prec)
    W = [QuermassEntry(V, "volume") for _ in range(n - 1)]
    Wm = _meanwidth_anchor(n, cls, mw, prec)
    W.append(QuermassEntry(Wm, "meanwidth") if mpf_lt(Wm.raw[1], V.raw[1]) else QuermassEntry(V, "volume"))
    W.append(QuermassEntry(ball_volume(n, prec), "exact_ball"))

    iterations = 0
    while True:
        iterations += 1
        changed = False
        for j in range(1, n):
            best = W[j]
            for i in range(j):
                for k in range(j + 1, n + 1):
                    b = bonnesen(n, R, i, j, k, W[i].bound, W[k].bound, prec)
                    if _improves(b, best.bound, prec):
                        best = QuermassEntry(b, f"bonnesen({i},{k})")
            if best is not W[j]:
                W[j] = best
                changed = True
        if not changed:
            break
    return QuermassBounds(n, cls, R, tuple(W), "auto", iterations)


def _improves(new: Enclosure, old: Enclosure, prec: int) -> bool:
    """new.hi < old.hi by more than 4 ulps of old.hi."""
    _, man, exp, bc = old.raw[1]
    slack = from_man_exp(4, exp + bc - prec) if man else from_man_exp(1, -prec)
    return mpf_lt(new.raw[1], mpf_sub(old.raw[1], slack, prec, "f"))


def _fmt_hi(e: Enclosure, digits: int = 6) -> str:
    return ceil_decimal(e.hi_fraction(), digits)


def assemble(n: int, q: QuermassBounds, theta: ThetaBound, prec: int = DEFAULT_PREC) -> HadwigerBound:
    """theta(B^n) / |B^n| * sum_j binom(n, j) W_j, floored on the upper endpoint."""
    if q.n != n or theta.n != n:
        raise ValueError("quermassintegral bounds, theta and n must refer to the same dimension")
    ball = ball_volume(n, prec)
    total = steiner_sum(n, q.bounds)
    real = theta.value * total / ball
    trace = [f"W_{j} <= {_fmt_hi(e.bound)}  [{e.source}]" for j, e in enumerate(q.W)]
    trace.append(f"R = {_fmt_hi(q.R)}  plan = {q.plan}")
    trace.append(f"theta(B^{n}) <= {_fmt_hi(theta.value)}  [{theta.method}]")
    trace.append(f"|K + B^{n}| / |B^{n}| <= {_fmt_hi(total / ball)}")
    trace.append(f"C(K, int K) <= {_fmt_hi(real)}")
    return HadwigerBound(n, q.cls, real, real.floor_hi(), theta, tuple(trace), "john")


def _near_integer(e: Enclosure) -> bool:
    hi = e.hi_fraction()
    frac = hi - (hi.numerator // hi.denominator)
    return frac < NEAR_INTEGER or 1 - frac < NEAR_INTEGER


def has_reference_plan(n: int, cls: BodyClass) -> bool:
    plans = GENERAL_PLANS if BodyClass(cls) is BodyClass.GENERAL else SYMMETRIC_PLANS
    return n in plans


def john_bound(n: int, cls: BodyClass, prec: int = DEFAULT_PREC,
               params: QuadratureParams = QuadratureParams(), plan: str = "paper",
               overrides=None, mw: MeanWidthResult | None = None,
               max_retries: int = 2) -> HadwigerBound:
    """Full John-ellipsoid bound for one (n, class), recomputed at doubled
    precision when the real bound sits within 2^-20 of an integer.
    """
    cls = BodyClass(cls)
    check_prec(prec)
    if plan not in ("paper", "auto"):
        raise ValueError(f"plan must be 'paper' or 'auto', got {plan!r}")
    if plan == "paper" and not has_reference_plan(n, cls):
        raise UnsupportedPlanError(f"no reference plan for n={n}, {cls.value}")
    p = prec
    for attempt in range(max_retries + 1):
        m = mw if (mw is not None and mw.width.prec >= p) else None
        if cls is BodyClass.GENERAL and m is None:
            m = simplex_mean_widths([n], params, p)[n]
        if plan == "paper":
            q = plan_general(n, m, p) if cls is BodyClass.GENERAL else plan_symmetric(n, p)
        else:
            q = auto_plan(n, cls, m, p)
        result = assemble(n, q, theta_best(n, p, overrides), p)
        if not _near_integer(result.real_bound) or attempt == max_retries:
            break
        p *= 2
    if plan == "auto":
        extra = [f"auto plan: fixpoint after {q.iterations} sweep(s)"]
        if has_reference_plan(n, cls):
            q_ref = plan_general(n, m, p) if cls is BodyClass.GENERAL else plan_symmetric(n, p)
            ref_int = assemble(n, q_ref, result.theta_used, p).integer_bound
            if result.integer_bound < ref_int:
                extra.append(f"strict improvement over reference plan: {result.integer_bound} < {ref_int}")
            else:
                extra.append(f"no strict improvement over reference plan ({ref_int})")
        else:
            extra.append("experimental: dimension outside the validated plan range")
        result = HadwigerBound(result.n, result.cls, result.real_bound, result.integer_bound,
                               result.theta_used, result.plan_trace + tuple(extra), "john")
    return result


def rogers_bound(n: int, cls: BodyClass, prec: int = DEFAULT_PREC, grid_N: int = DEFAULT_GRID) -> HadwigerBound:
    cls = BodyClass(cls)
    check_dim(n, 3)
    rr = rogers_rn(n, grid_N, prec)
    mult = hadwiger_multiplier(n, cls)
    real = rr.r * mult
    trace = (
        f"r_{n} <= {rr.r_hi_ceiled()}  [grid N={grid_N}, j={rr.best_j}]",
        f"multiplier = {mult}  [{'binom(2n,n)' if cls is BodyClass.GENERAL else '2^n'}]",
        f"C(K, int K) <= {_fmt_hi(real)}",
    )
    return HadwigerBound(n, cls, real, real.floor_hi(), ThetaBound(n, rr.r, "rogers"), trace, "rogers")


def external_bound(n: int, cls: BodyClass, prec: int = DEFAULT_PREC) -> HadwigerBound:
    cls = BodyClass(cls)
    try:
        value, citation = EXTERNAL_BOUNDS[(n, cls)]
    except KeyError:
        raise UnsupportedPlanError(f"no external bound recorded for n={n}, {cls.value}") from None
    return HadwigerBound(n, cls, Enclosure(value, prec=prec), value, None,
                         (f"external: {citation}",), "external")


def best_bound(n: int, cls: BodyClass, prec: int = DEFAULT_PREC,
               params: QuadratureParams = QuadratureParams(), grid_N: int = DEFAULT_GRID,
               overrides=None, plan: str = "paper", mw: MeanWidthResult | None = None) -> HadwigerBound:
    """Smallest integer bound over the John assembly, Rogers and published constants."""
    cls = BodyClass(cls)
    check_dim(n, 3)
    candidates = [rogers_bound(n, cls, prec, grid_N)]
    if has_reference_plan(n, cls) or plan == "auto":
        candidates.append(john_bound(n, cls, prec, params, plan, overrides, mw))
    if (n, cls) in EXTERNAL_BOUNDS:
        candidates.append(external_bound(n, cls, prec))
    best = min(candidates, key=lambda b: b.integer_bound)
    others = ", ".join(f"{c.method}={c.integer_bound}" for c in candidates if c is not best)
    trace = best.plan_trace + (f"selected {best.method} over: {others or 'none'}",)
    return HadwigerBound(best.n, best.cls, best.real_bound, best.integer_bound,
                         best.theta_used, trace, best.method)
