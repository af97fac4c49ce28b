"""Exact measure-side computations on RealSets.

Length (Lebesgue) measure, first moments, piecewise-constant density
measures, open neighborhood fattening with exact merge indices, and the
Hausdorff distance for interval/point sets. Everything returns Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import (
    BadParameters,
    EmptySet,
    NotCompact,
    NullSet,
    OutsideSupport,
    UnsupportedDepth,
)
from .exactset import (
    Cluster,
    Geometric,
    Harmonic,
    Interval,
    RealSet,
    Rule,
    _max_k_offset_ge,
    normalize,
    rule_gap,
    rule_offset,
    set_diff,
)

Q = Fraction


def lebesgue(h: RealSet) -> Fraction:
    """Total length of the interval mass; points and clusters are null."""
    return sum((iv.length for iv in h.intervals), Q(0))


def moment(h: RealSet) -> Fraction:
    """First moment of the interval mass: sum of integrals of x dx."""
    return sum(((iv.hi * iv.hi - iv.lo * iv.lo) / 2 for iv in h.intervals), Q(0))


def support(h: RealSet) -> RealSet:
    """Essential support: the closed interval mass (null parts dropped)."""
    return normalize([Interval(iv.lo, iv.hi, True, True) for iv in h.intervals])


def essential_bounds(h: RealSet) -> tuple[Fraction, Fraction]:
    """(inf, sup) of the interval mass; NullSet when there is none."""
    if not h.intervals:
        raise NullSet("the set carries no length; essential bounds undefined")
    return h.intervals[0].lo, h.intervals[-1].hi


# --------------------------------------------------------------------------
# piecewise-constant density measures


@dataclass(frozen=True)
class DensityMeasure:
    """A measure with piecewise-constant density against length.

    pieces: sorted, non-overlapping (interval, density) pairs with density
    > 0. Everything outside the pieces carries no mass.
    """

    pieces: tuple[tuple[Interval, Fraction], ...]

    def __post_init__(self):
        prev_hi: Optional[Fraction] = None
        for iv, dens in self.pieces:
            if dens <= 0:
                raise BadParameters("density values must be positive")
            if iv.lo >= iv.hi:
                raise BadParameters("density pieces need positive length")
            if prev_hi is not None and iv.lo < prev_hi:
                raise BadParameters("density pieces must be sorted and disjoint")
            prev_hi = iv.hi

    @staticmethod
    def from_parts(parts: Iterable[tuple[Fraction, Fraction, Fraction]]) -> "DensityMeasure":
        pieces = tuple(sorted((Interval(Q(lo), Q(hi), True, True), Q(d))
                              for lo, hi, d in parts))
        return DensityMeasure(pieces)


def _overlap(a_lo, a_hi, b_lo, b_hi) -> tuple[Fraction, Fraction]:
    lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
    return (lo, hi) if lo < hi else (Q(0), Q(0))


def mu_measure(h: RealSet, mu: DensityMeasure) -> Fraction:
    """mu(h); raises OutsideSupport when h has length outside the pieces."""
    _check_support(h, mu)
    total = Q(0)
    for iv in h.intervals:
        for piece, dens in mu.pieces:
            lo, hi = _overlap(iv.lo, iv.hi, piece.lo, piece.hi)
            total += dens * (hi - lo)
    return total


def mu_moment(h: RealSet, mu: DensityMeasure) -> Fraction:
    """Integral of x over h against mu."""
    _check_support(h, mu)
    total = Q(0)
    for iv in h.intervals:
        for piece, dens in mu.pieces:
            lo, hi = _overlap(iv.lo, iv.hi, piece.lo, piece.hi)
            total += dens * (hi * hi - lo * lo) / 2
    return total


def _check_support(h: RealSet, mu: DensityMeasure) -> None:
    for iv in h.intervals:
        covered = Q(0)
        for piece, _dens in mu.pieces:
            lo, hi = _overlap(iv.lo, iv.hi, piece.lo, piece.hi)
            covered += hi - lo
        if covered < iv.length:
            raise OutsideSupport(
                "part of the set carries length outside the measure's support")


# --------------------------------------------------------------------------
# fattening: the open delta-neighborhood


def _native_depth1(c: Cluster) -> None:
    if c.children:
        raise UnsupportedDepth(
            "this operation supports plain depth-1 sequence components")
    if not isinstance(c.rule, (Harmonic, Geometric)):
        raise UnsupportedDepth(
            "this operation supports harmonic/geometric rules only")


def _merge_index(rule: Rule, start: int, threshold: Fraction) -> int:
    """Smallest k >= start with gap(k) < threshold.

    Native-rule gaps decrease strictly, so a doubling search plus bisection
    finds the exact index.
    """
    if rule_gap(rule, start) < threshold:
        return start
    step = 1
    hi = start + step
    while rule_gap(rule, hi) >= threshold:
        step *= 2
        hi = start + step
    lo = start  # gap(lo) >= threshold > gap(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rule_gap(rule, mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return hi


def fatten(h: RealSet, delta) -> RealSet:
    """The open delta-neighborhood: the union of (x - delta, x + delta)
    over the elements x of h. Exact; the result is a finite union of open
    intervals. Clusters must be plain depth-1 harmonic/geometric components.
    """
    delta = Q(delta)
    if delta <= 0:
        raise BadParameters("fattening radius must be positive")
    if h.is_empty:
        raise EmptySet("cannot fatten the empty set")
    ivs: list[Interval] = []
    for iv in h.intervals:
        ivs.append(Interval(iv.lo - delta, iv.hi + delta, False, False))
    for p in h.points:
        ivs.append(Interval(p - delta, p + delta, False, False))
    for c in h.clusters:
        _native_depth1(c)
        # Terms with consecutive gap < 2*delta chain together and connect
        # to the limit's neighborhood; earlier terms keep separate balls.
        k_merge = _merge_index(c.rule, c.start, 2 * delta)
        blob_reach = rule_offset(c.rule, k_merge) + delta
        if c.above:
            ivs.append(Interval(c.limit - delta, c.limit + blob_reach,
                                False, False))
        else:
            ivs.append(Interval(c.limit - blob_reach, c.limit + delta,
                                False, False))
        for k in range(c.start, k_merge):
            t = c.term(k)
            ivs.append(Interval(t - delta, t + delta, False, False))
    return normalize(ivs)


# --------------------------------------------------------------------------
# Hausdorff distance (interval/point sets)


def _closed_spans(h: RealSet) -> list[tuple[Fraction, Fraction]]:
    """Closure of the interval/point mass as merged closed [lo, hi] pairs."""
    raw = sorted([(iv.lo, iv.hi) for iv in h.intervals]
                 + [(p, p) for p in h.points])
    out: list[tuple[Fraction, Fraction]] = []
    for lo, hi in raw:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _dist_to_closed(x: Fraction, spans: list[tuple[Fraction, Fraction]]) -> Fraction:
    best: Optional[Fraction] = None
    for lo, hi in spans:
        if lo <= x <= hi:
            return Q(0)
        d = lo - x if x < lo else x - hi
        if best is None or d < best:
            best = d
    assert best is not None
    return best


def _directed_hausdorff(a: RealSet, b: RealSet) -> Fraction:
    """sup over x in a of dist(x, closure of b); both interval/point sets."""
    a_spans = _closed_spans(a)
    b_spans = _closed_spans(b)
    if not b_spans:
        raise EmptySet("distance to the empty set is undefined")
    candidates: list[Fraction] = []
    for lo, hi in a_spans:
        candidates.extend((lo, hi))
        # interior maxima of dist(., b) sit at midpoints of b's gaps
        for (l1, h1), (l2, h2) in zip(b_spans, b_spans[1:]):
            mid = (h1 + l2) / 2
            if lo < mid < hi:
                candidates.append(mid)
    return max((_dist_to_closed(x, b_spans) for x in candidates), default=Q(0))


def hausdorff_distance(a: RealSet, b: RealSet) -> Fraction:
    """Hausdorff distance between the closures of two interval/point sets."""
    if a.clusters or b.clusters:
        raise UnsupportedDepth(
            "hausdorff distance is implemented for interval/point sets")
    if a.is_empty or b.is_empty:
        raise EmptySet("hausdorff distance needs nonempty sets")
    return max(_directed_hausdorff(a, b), _directed_hausdorff(b, a))


def diameter(h: RealSet) -> Fraction:
    lo, hi = h.bounds()
    return hi - lo
