"""Analytical constructions over a chosen mean.

Everything here is parameterized by a ``MeanRef``: liminf/limsup of a set
*with respect to a mean*, accumulation points *by a mean*, closedness in
that sense, two derivative-like quantities built from shrinking or appended
neighborhoods, extremal bounds for length-constrained subsets, and the
pointwise/uniform convergence framework for sequences of means.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import (
    BadParameters,
    DomainExit,
    DomainViolation,
    MeanlabError,
    NotCompact,
    UnsupportedMean,
)
from .exactset import (
    RealSet,
    derived_iter,
    from_interval,
    from_points,
    level,
    set_diff,
    set_intersect,
    set_union,
    slice_ge,
    slice_le,
    subset_of,
)
from .limits import DEFAULT_SCHEDULE, LimitSchedule, aitken_accelerate, limit_estimate
from .means import MeanRef, amean, avg1, m_acc
from .measure import essential_bounds, lebesgue, support
from .values import Approx, RootValue, value_mid, values_close

Q = Fraction

Value = Union[Fraction, RootValue, Approx]

#: equality tolerance for means that only return certified estimates
INEXACT_TOL = Q(1, 2 ** 40)

#: the generic liminf/limsup bisection stops at this bracket width
_BISECT_WIDTH = Q(1, 2 ** 44)


def _values_equal(k: MeanRef, a: Value, b: Value) -> bool:
    if k.exact:
        if isinstance(a, (Fraction, int)) and isinstance(b, (Fraction, int)):
            return a == b
    return values_close(a, b, INEXACT_TOL)


# --------------------------------------------------------------------------
# liminf / limsup with respect to a mean


def _bound_by_bisection(k: MeanRef, h: RealSet, *, upper: bool) -> Value:
    """sup{x : K(H ∩ [x,∞)) = K(H)} (lower bound) or the mirrored
    inf{x : K(H ∩ (−∞,x]) = K(H)} (upper bound), by bisection.

    The equality set is assumed to be a ray ending at the answer, which
    holds for monotone means; non-monotone means get a best-effort bracket.
    """
    base = k.evaluate(h)
    lo, hi = h.bounds()

    def pred(x: Fraction) -> bool:
        try:
            sl = slice_le(h, x) if upper else slice_ge(h, x)
            if sl.is_empty:
                return False
            return _values_equal(k, k.evaluate(sl), base)
        except MeanlabError:
            return False

    if upper:
        # pred(sup) is true by construction; find the smallest true x
        if pred(lo):
            return lo
        good, bad = hi, lo  # invariant: pred(good), not pred(bad)
        while good - bad > _BISECT_WIDTH:
            mid = (good + bad) / 2
            if pred(mid):
                good = mid
            else:
                bad = mid
        return Approx((good + bad) / 2, (good - bad) / 2)
    if pred(hi):
        return hi
    good, bad = lo, hi
    while bad - good > _BISECT_WIDTH:
        mid = (good + bad) / 2
        if pred(mid):
            good = mid
        else:
            bad = mid
    return Approx((good + bad) / 2, (bad - good) / 2)


def liminf_by_mean(k: MeanRef, h: RealSet, *,
                   force_bisection: bool = False) -> Value:
    """The largest x below which the set can be cut without moving the mean:
    sup{x : K(H ∩ [x, ∞)) = K(H)}.

    For the plain length average this is the essential infimum, returned
    exactly; other means go through bisection on the cut predicate.
    """
    if h.is_empty:
        raise DomainViolation("mean bounds need a nonempty set")
    if k.id == "avg1" and not force_bisection:
        return essential_bounds(h)[0]
    return _bound_by_bisection(k, h, upper=False)


def limsup_by_mean(k: MeanRef, h: RealSet, *,
                   force_bisection: bool = False) -> Value:
    """inf{x : K(H ∩ (−∞, x]) = K(H)}; essential supremum for the plain
    length average."""
    if h.is_empty:
        raise DomainViolation("mean bounds need a nonempty set")
    if k.id == "avg1" and not force_bisection:
        return essential_bounds(h)[1]
    return _bound_by_bisection(k, h, upper=True)


def core_restriction_check(k: MeanRef, h: RealSet) -> bool:
    """Does restricting the set to [liminf, limsup] (by the mean) keep the
    mean unchanged?"""
    li = liminf_by_mean(k, h)
    ls = limsup_by_mean(k, h)
    a, b = value_mid(li), value_mid(ls)
    core = set_intersect(h, from_interval(a, b))
    if core.is_empty:
        return False
    try:
        return _values_equal(k, k.evaluate(core), k.evaluate(h))
    except MeanlabError:
        return False


# --------------------------------------------------------------------------
# accumulation points by a mean


def acc_points_by_mean(k: MeanRef, h: RealSet) -> RealSet:
    """The set of points near which some removable piece would change the
    mean (removal that exits the mean's domain counts as a change).

    Supported exactly for the plain length average (its answer is the
    essential support), the finite arithmetic mean, and the deep-derived
    mean; other catalogue entries have no structural evaluation.
    """
    kind = k.kind()
    if kind == "avg1":
        return support(h)
    if kind == "amean":
        if h.is_empty or not h.is_finite():
            raise DomainViolation("the finite arithmetic mean needs a "
                                  "nonempty finite set")
        if len(h.points) == 1:
            return h
        return set_diff(h, from_points(amean(h)))
    if kind == "m_acc":
        ell = level(h)
        deep = derived_iter(h, ell)
        if deep.is_finite() and len(deep.points) == 1:
            return deep
        return set_diff(deep, from_points(m_acc(h)))
    raise UnsupportedMean(
        f"no structural accumulation-point evaluation for {k.id}")


def is_k_closed(k: MeanRef, h: RealSet) -> bool:
    """Does the set contain all of its accumulation points by the mean?"""
    return subset_of(acc_points_by_mean(k, h), h)


# --------------------------------------------------------------------------
# derivative-like quantities


def _avg1_occupancy_hint(h: RealSet, x: Fraction) -> Optional[Fraction]:
    """Closed-form shrinking-neighborhood derivative for the length average:
    0 in the interior of the mass, ±1/2 at one-sided edges, None if the
    point carries no nearby length."""
    left = any(iv.lo < x <= iv.hi for iv in h.intervals)
    right = any(iv.lo <= x < iv.hi for iv in h.intervals)
    if left and right:
        return Q(0)
    if left:
        return Q(-1, 2)
    if right:
        return Q(1, 2)
    return None


def d_mean(k: MeanRef, h: RealSet, x, schedule: LimitSchedule = DEFAULT_SCHEDULE
           ) -> tuple[Value, Value, Optional[Fraction]]:
    """Difference quotient (K(ball(x, δ) ∩ H) − x)/δ along shrinking δ.

    Returns (lower, upper, exact_hint): equal exact values when the
    quotient is eventually constant, otherwise a bracket from the
    accelerated tail. The hint carries the closed-form value for the plain
    length average when the point sits on interval mass.
    """
    x = Q(x)
    quotients: list[Fraction] = []
    for n in schedule.indices:
        delta = Q(1, n)
        ball = from_interval(x - delta, x + delta, False, False)
        sl = set_intersect(h, ball)
        if sl.is_empty:
            raise DomainExit(
                f"the ball of radius 1/{n} around {x} misses the set")
        try:
            v = k.evaluate(sl)
        except MeanlabError as e:
            raise DomainExit(
                f"the slice at radius 1/{n} leaves the mean's domain: {e}")
        quotients.append((value_mid(v) - x) / delta)
    hint = _avg1_occupancy_hint(h, x) if k.kind() == "avg1" else None
    tail = quotients[-schedule.agreements:]
    if all(t == tail[0] for t in tail):
        return tail[0], tail[0], hint
    acc = aitken_accelerate(quotients) or quotients
    tail = acc[-schedule.agreements:]
    lo, hi = min(tail), max(tail)
    spread = max(hi - lo, schedule.tolerance)
    return Approx(lo, spread), Approx(hi, spread), hint


def d_probe(k: MeanRef, h: RealSet, side: str,
            schedule: LimitSchedule = DEFAULT_SCHEDULE
            ) -> tuple[Value, Optional[Fraction]]:
    """Rate of change of the mean when a vanishing interval is appended at
    the supremum (side="sup_append") or infimum (side="inf_append").

    Exact for the plain length average: (sup − mean)/length, respectively
    (inf − mean)/length.
    """
    if side not in ("sup_append", "inf_append"):
        raise BadParameters("side must be sup_append or inf_append")
    if not h.is_compact_rep():
        raise NotCompact("the probe needs a compact set")
    a, b = h.bounds()
    if k.kind() == "avg1":
        v = avg1(h)
        lam = lebesgue(h)
        exact = (b - v) / lam if side == "sup_append" else (a - v) / lam
        return exact, exact

    base = value_mid(k.evaluate(h))

    def sampler(n: int) -> Fraction:
        eps = Q(1, n)
        if side == "sup_append":
            probe = set_union(h, from_interval(b, b + eps))
        else:
            probe = set_union(h, from_interval(a - eps, a))
        return (value_mid(k.evaluate(probe)) - base) / eps

    return limit_estimate(sampler, schedule, label="append probe"), None


def extremal_avg(a, b, h) -> tuple[Fraction, Fraction]:
    """Range of the length average over subsets of [a, b] carrying total
    length h: the minimum a + h/2 (attained by [a, a+h]) and the maximum
    b − h/2 (attained by [b−h, b])."""
    a, b, h = Q(a), Q(b), Q(h)
    if not a < b:
        raise BadParameters("need a < b")
    if not (0 < h < b - a):
        raise BadParameters("need 0 < h < b - a")
    return a + h / 2, b - h / 2


def sup_bound_check(h: RealSet) -> bool:
    """Exact check that the set reaches at least half its length above and
    below its average: sup ≥ mean + λ/2 and inf ≤ mean − λ/2."""
    v = avg1(h)  # raises NullSet / EmptySet when undefined
    lam = lebesgue(h)
    lo, hi = h.bounds()
    return hi >= v + lam / 2 and lo <= v - lam / 2


# --------------------------------------------------------------------------
# sequences of means: pointwise and uniform convergence


@dataclass(frozen=True)
class MeanSequence:
    """An index-to-mean rule with the shared domain contract."""

    id: str
    at: Callable[[int], MeanRef]
    domain_predicate: Callable[[RealSet], bool]

    def in_domain(self, h: RealSet) -> bool:
        return bool(self.domain_predicate(h))


def avg_fat_sequence() -> MeanSequence:
    from .means import avg_fat_ref

    return MeanSequence(
        "avg_fat(1/n)",
        lambda n: avg_fat_ref(Q(1, n)),
        lambda h: not h.is_empty)


def eds_sequence() -> MeanSequence:
    from .means import eds_ref

    return MeanSequence(
        "eds(n)",
        lambda n: eds_ref(n),
        lambda h: (not h.is_empty) and h.bounds()[0] < h.bounds()[1])


def iso_sequence() -> MeanSequence:
    from .means import iso_ref

    return MeanSequence(
        "iso(n)",
        lambda n: iso_ref(n),
        lambda h: (not h.is_empty) and not h.intervals)


def pointwise_limit(seq: MeanSequence, h: RealSet,
                    schedule: LimitSchedule = DEFAULT_SCHEDULE) -> Approx:
    """Accelerated limit of the stage-n means on a fixed set."""
    return limit_estimate(lambda n: value_mid(seq.at(n).evaluate(h)),
                          schedule, label=f"{seq.id} pointwise limit")


def grid_family(m: int) -> RealSet:
    """[1,2] together with the m-step grid on [0,1]; converges to [0,2] in
    the Hausdorff metric while carrying length only on [1,2]."""
    if m < 1:
        raise BadParameters("the grid family needs m >= 1")
    pts = [Q(kk, m) for kk in range(m + 1)]
    return set_union(from_interval(Q(1), Q(2)), from_points(*pts))


def uniformity_witness_at(seq: MeanSequence, k_limit: MeanRef,
                          family: Callable[[int], RealSet], epsilon,
                          n: int, *, m_cap: int | None = None
                          ) -> Optional[RealSet]:
    """Search the family (doubling the index) for a set where the stage-n
    mean sits at least epsilon away from the limit mean."""
    epsilon = Q(epsilon)
    cap = m_cap if m_cap is not None else max(8 * n + 16, 64)
    m = 1
    while m <= cap:
        try:
            h = family(m)
            gap = abs(value_mid(seq.at(n).evaluate(h))
                      - value_mid(k_limit.evaluate(h)))
            if gap >= epsilon:
                return h
        except MeanlabError:
            pass
        m *= 2
    return None


def uniformity_witness(seq: MeanSequence, k_limit: MeanRef,
                       family: Callable[[int], RealSet], epsilon,
                       n_max: int) -> Optional[tuple[RealSet, int]]:
    """Evidence against uniform convergence: a family member and a stage n
    at which the stage mean misses the limit mean by at least epsilon."""
    n = n_max
    while n >= 1:
        h = uniformity_witness_at(seq, k_limit, family, epsilon, n)
        if h is not None:
            return h, n
        n //= 2
    return None
