"""Exact representation of finitely describable bounded real sets.

A ``RealSet`` is a normalized disjoint union of three component kinds:

* finitely many intervals with rational endpoints and open/closed flags,
* finitely many isolated rational points,
* finitely many ``Cluster`` structures: convergent sequences with a declared
  rational limit, a side (terms above or below the limit), an exact offset
  rule, and optionally nested child clusters placed in disjoint windows
  around terms, which makes iterated derived sets structurally decidable.

All arithmetic is exact rational arithmetic; floats never enter any decision.
The interval/point fragment is encoded on a totally ordered key space
``(position, side)`` with side in {-1, 0, +1} meaning "just below x",
"exactly x", "just above x"; every boolean operation reduces to closed
key-range algebra, so open/closed endpoint behavior is exact by construction.

Normalization produces a canonical form: intervals sorted, disjoint and
non-adjacent; points sorted, deduplicated, never redundant with an interval
or a cluster; clusters canonically based (geometric rules rebased to start
index 1, child templates centered at 0) with pairwise disjoint hulls apart
from a few provably-disjoint same-limit families that are admitted as-is.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import (
    BadParameters,
    EmptyDerivedSet,
    EmptySet,
    InfiniteLevel,
    OverlappingClusterWindows,
    UnrepresentableResult,
    ZeroScale,
)
from .funcs import MonotoneFunc

Q = Fraction

# Guard against astronomically large finite materializations (cutting a
# cluster at index ~10**9 is representable only by enumerating every head
# term, which is a resource boundary rather than a mathematical one).
MATERIALIZE_CAP = 200_000

# --------------------------------------------------------------------------
# key space: (position, side), side -1 = just below, 0 = at, +1 = just above

Key = tuple[Fraction, int]


def _key_succ(k: Key) -> Optional[Key]:
    x, e = k
    if e == -1:
        return (x, 0)
    if e == 0:
        return (x, 1)
    return None  # nothing is adjacent above "just above x"


def _key_pred(k: Key) -> Optional[Key]:
    x, e = k
    if e == 1:
        return (x, 0)
    if e == 0:
        return (x, -1)
    return None


Span = tuple[Key, Key]  # closed range in key space, start <= end


def _merge_spans(spans: list[Span]) -> list[Span]:
    """Sort and coalesce closed key-ranges, fusing adjacent ones."""
    if not spans:
        return []
    spans = sorted(spans)
    out = [spans[0]]
    for s in spans[1:]:
        last = out[-1]
        nxt = _key_succ(last[1])
        if s[0] <= last[1] or (nxt is not None and s[0] <= nxt):
            if s[1] > last[1]:
                out[-1] = (last[0], s[1])
        else:
            out.append(s)
    return out


def _span_intersect(a: list[Span], b: list[Span]) -> list[Span]:
    out: list[Span] = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def _span_diff(a: list[Span], b: list[Span]) -> list[Span]:
    out: list[Span] = []
    for lo, hi in a:
        cur: Optional[Key] = lo
        for blo, bhi in b:
            if cur is None or blo > hi:
                break
            if bhi < cur:
                continue
            if blo > cur:
                pre = _key_pred(blo)
                if pre is not None and cur <= pre:
                    out.append((cur, pre))
            if bhi >= hi:
                cur = None
            else:
                cur = _key_succ(bhi)
        if cur is not None and cur <= hi:
            out.append((cur, hi))
    return out


def _span_contains(spans: list[Span], x: Fraction) -> bool:
    key = (x, 0)
    i = bisect.bisect_right(spans, ((x, 2), (x, 2))) - 1
    while i >= 0:
        if spans[i][0] <= key <= spans[i][1]:
            return True
        if spans[i][1] < key:
            return False
        i -= 1
    return False


def _span_overlaps(spans: list[Span], lo: Key, hi: Key) -> bool:
    for s in spans:
        if s[0] > hi:
            break
        if s[1] >= lo:
            return True
    return False


def _reflect_spans(spans: list[Span]) -> list[Span]:
    return sorted(((-b[0], -b[1]), (-a[0], -a[1])) for a, b in spans)


# --------------------------------------------------------------------------
# intervals


@dataclass(frozen=True, order=True)
class Interval:
    """A nonempty rational interval; degenerate [a,a] must be closed."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", Q(self.lo))
        object.__setattr__(self, "hi", Q(self.hi))
        if self.lo > self.hi:
            raise BadParameters("interval endpoints out of order")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise BadParameters("half-open degenerate interval is empty")

    def span(self) -> Span:
        a = (self.lo, 0 if self.lo_closed else 1)
        b = (self.hi, 0 if self.hi_closed else -1)
        return (a, b)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def _span_to_part(s: Span):
    (x, ex), (y, ey) = s
    if x == y and ex == 0 and ey == 0:
        return ("point", x)
    return ("interval", Interval(x, y, ex == 0, ey == 0))


# --------------------------------------------------------------------------
# offset rules


@dataclass(frozen=True)
class Harmonic:
    """offset(k) = c / k for k >= 1; c > 0."""

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", Q(self.c))
        if self.c <= 0:
            raise BadParameters("harmonic rule needs c > 0")


@dataclass(frozen=True)
class Geometric:
    """offset(k) = c * q**k for k >= 1; c > 0, 0 < q < 1."""

    c: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", Q(self.c))
        object.__setattr__(self, "q", Q(self.q))
        if self.c <= 0:
            raise BadParameters("geometric rule needs c > 0")
        if not (0 < self.q < 1):
            raise BadParameters("geometric rule needs 0 < q < 1")


@dataclass(frozen=True)
class MappedRule:
    """Offsets of a monotone image of a native-rule sequence.

    offset(k) = |func(base_term(k)) - func(base_limit)| where base_term(k)
    is the k-th term of the underlying native sequence. func must be an
    exact monotone kind so terms stay rational. Mapped clusters never carry
    child blocks, so offset monotonicity is the only property required.
    """

    base: Union[Harmonic, Geometric]
    base_limit: Fraction
    base_above: bool
    func: MonotoneFunc

    def __post_init__(self):
        if not self.func.exact:
            raise BadParameters("mapped rule needs an exact transform")


Rule = Union[Harmonic, Geometric, MappedRule]


def rule_offset(rule: Rule, k: int) -> Fraction:
    if isinstance(rule, Harmonic):
        return rule.c / k
    if isinstance(rule, Geometric):
        return rule.c * rule.q ** k
    base_off = rule_offset(rule.base, k)
    t = rule.base_limit + base_off if rule.base_above else rule.base_limit - base_off
    return abs(rule.func.apply(t) - rule.func.apply(rule.base_limit))


def rule_gap(rule: Rule, k: int) -> Fraction:
    return rule_offset(rule, k) - rule_offset(rule, k + 1)


def rule_scaled(rule: Rule, factor: Fraction) -> Rule:
    """The rule with every offset multiplied by factor > 0."""
    if factor <= 0:
        raise BadParameters("offset scale factor must be positive")
    if isinstance(rule, Harmonic):
        return Harmonic(rule.c * factor)
    if isinstance(rule, Geometric):
        return Geometric(rule.c * factor, rule.q)
    from .funcs import Affine, Compose

    return MappedRule(rule.base, rule.base_limit, rule.base_above,
                      Compose(Affine(factor, Q(0)), rule.func))


def _max_k_offset_ge(rule: Rule, start: int, t: Fraction) -> Optional[int]:
    """Largest k >= start with offset(k) >= t, or None. Requires t > 0."""
    if t <= 0:
        raise BadParameters("offset threshold must be positive")
    if rule_offset(rule, start) < t:
        return None
    step = 1
    while rule_offset(rule, start + step) >= t:
        step *= 2
    lo, hi = start + step // 2, start + step  # offset(lo) >= t > offset(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rule_offset(rule, mid) >= t:
            lo = mid
        else:
            hi = mid
    return lo


# --------------------------------------------------------------------------
# clusters


@dataclass(frozen=True)
class ChildBlock:
    """Indices [lo, hi] (hi None = unbounded) carrying scaled child copies."""

    lo: int
    hi: Optional[int]
    template: "Cluster"


@dataclass(frozen=True)
class Cluster:
    limit: Fraction
    above: bool
    rule: Rule
    start: int = 1
    include_limit: bool = False
    children: tuple[ChildBlock, ...] = ()

    def term(self, k: int) -> Fraction:
        off = rule_offset(self.rule, k)
        return self.limit + off if self.above else self.limit - off

    def window(self, k: int) -> Fraction:
        """Window radius around term(k); child copies live inside it and
        windows of distinct indices are disjoint by construction."""
        return rule_gap(self.rule, k) / 4

    def block_at(self, k: int) -> Optional[ChildBlock]:
        for b in self.children:
            if b.lo <= k and (b.hi is None or k <= b.hi):
                return b
        return None

    @property
    def depth(self) -> int:
        if not self.children:
            return 1
        return 1 + max(b.template.depth for b in self.children)

    def first_offset(self) -> Fraction:
        return rule_offset(self.rule, self.start)

    def sup(self) -> Fraction:
        if not self.above:
            return self.limit
        k = self.start
        b = self.block_at(k)
        if b is not None and b.template.above:
            return self.term(k) + self.window(k)
        return self.term(k)

    def inf(self) -> Fraction:
        if self.above:
            return self.limit
        k = self.start
        b = self.block_at(k)
        if b is not None and not b.template.above:
            return self.term(k) - self.window(k)
        return self.term(k)

    def hull(self) -> tuple[Key, Key]:
        """Conservative key-range containing every element except the limit
        point, staying strictly on the cluster's side of the limit."""
        if self.above:
            return ((self.limit, 1),
                    (self.term(self.start) + self.window(self.start), 0))
        return ((self.term(self.start) - self.window(self.start), 0),
                (self.limit, -1))


def make_cluster(limit, above: bool, rule: Rule, start: int = 1,
                 include_limit: bool = False,
                 children: Iterable[tuple[int, Optional[int], "Cluster"]] = ()) -> Cluster:
    """Validating, canonicalizing cluster constructor.

    Geometric rules are rebased to start index 1, child templates are
    recentered so their limit sits at 0, and child blocks must be sorted,
    disjoint, within range, with at most one unbounded block at the end.
    """
    limit = Q(limit)
    if start < 1:
        raise BadParameters("cluster start index must be >= 1")
    blocks: list[ChildBlock] = []
    open_ended = False
    prev_hi: Optional[int] = None
    for lo, hi, tpl in children:
        if open_ended:
            raise BadParameters("no child block may follow an unbounded one")
        if lo < start or (hi is not None and hi < lo):
            raise BadParameters("child block indices out of range")
        if blocks and prev_hi is not None and lo <= prev_hi:
            raise BadParameters("child blocks must be disjoint and sorted")
        if not isinstance(tpl, Cluster):
            raise BadParameters("child template must be a cluster")
        tpl0 = _canonical_cluster(tpl)
        if tpl0.limit != 0:
            tpl0 = cluster_affine(tpl0, Q(1), -tpl0.limit)
        blocks.append(ChildBlock(lo, hi, tpl0))
        prev_hi = hi
        open_ended = hi is None
    if isinstance(rule, Geometric) and start != 1:
        shift = start - 1
        rule = Geometric(rule.c * rule.q ** shift, rule.q)
        blocks = [ChildBlock(b.lo - shift, None if b.hi is None else b.hi - shift,
                             b.template) for b in blocks]
        start = 1
    return Cluster(limit, above, rule, start, include_limit, tuple(blocks))


def _canonical_cluster(cl: Cluster) -> Cluster:
    """Re-run the canonicalizing constructor on a raw Cluster object."""
    return make_cluster(cl.limit, cl.above, cl.rule, cl.start, cl.include_limit,
                        [(b.lo, b.hi, b.template) for b in cl.children])


def cluster_affine(cl: Cluster, a: Fraction, b: Fraction) -> Cluster:
    """Exact image of the cluster under x -> a*x + b, a != 0."""
    if a == 0:
        raise ZeroScale("scale factor must be nonzero")
    above = cl.above if a > 0 else not cl.above
    rule = rule_scaled(cl.rule, abs(a))
    children = tuple(ChildBlock(c.lo, c.hi, cluster_affine(c.template, a, Q(0)))
                     for c in cl.children)
    return Cluster(a * cl.limit + b, above, rule, cl.start, cl.include_limit,
                   children)


def cluster_tail(cl: Cluster, new_start: int) -> Cluster:
    """The sub-cluster of indices k >= new_start, canonically rebased."""
    if new_start <= cl.start:
        return cl
    blocks = []
    for b in cl.children:
        if b.hi is not None and b.hi < new_start:
            continue
        blocks.append((max(b.lo, new_start), b.hi, b.template))
    return make_cluster(cl.limit, cl.above, cl.rule, new_start,
                        cl.include_limit, blocks)


def placed_child(cl: Cluster, k: int) -> Cluster:
    """The child copy anchored at term(k): the template scaled to fill the
    window of radius window(k), with its limit moved onto the term."""
    b = cl.block_at(k)
    if b is None:
        raise BadParameters(f"index {k} carries no child copy")
    factor = cl.window(k) / b.template.first_offset()
    return cluster_affine(b.template, factor, cl.term(k))


def materialize_index(cl: Cluster, k: int):
    """('point', x) for a bare index, ('cluster', copy) for a child index."""
    if cl.block_at(k) is not None:
        return ("cluster", placed_child(cl, k))
    return ("point", cl.term(k))


def cluster_member(cl: Cluster, x: Fraction) -> bool:
    if x == cl.limit:
        return cl.include_limit
    off = x - cl.limit if cl.above else cl.limit - x
    if off <= 0:
        return False
    cands = set()
    k1 = _max_k_offset_ge(cl.rule, cl.start, off)
    if k1 is None:
        cands.add(cl.start)
    else:
        cands.update((k1, k1 + 1))
    for k in cands:
        if k < cl.start:
            continue
        if cl.block_at(k) is None:
            if cl.term(k) == x:
                return True
        else:
            if (abs(x - cl.term(k)) <= cl.window(k)
                    and cluster_member(placed_child(cl, k), x)):
                return True
    return False


def _cluster_reflect(cl: Cluster) -> Cluster:
    return cluster_affine(cl, Q(-1), Q(0))


def _covered_index_range(cl: Cluster, u: Key, v: Key) -> Optional[tuple[int, Optional[int]]]:
    """Indices k of an above-cluster whose term lies in the key-range [u, v].

    Returns (k_lo, k_hi) with k_hi None meaning the range reaches the limit
    (every sufficiently large index is covered), or None when empty.
    """
    limit = cl.limit
    vx, ve = v
    if vx <= limit:
        return None  # the range top is at or below the limit; terms are above
    k_ge = _max_k_offset_ge(cl.rule, cl.start, vx - limit)
    if k_ge is None:
        k_lo = cl.start
    elif ve >= 0 and cl.term(k_ge) == vx:
        k_lo = k_ge
    else:
        k_lo = k_ge + 1
    ux, ue = u
    if ux <= limit:
        k_hi: Optional[int] = None  # the range reaches down to the limit
    else:
        k_max = _max_k_offset_ge(cl.rule, cl.start, ux - limit)
        if k_max is None:
            return None
        if cl.term(k_max) == ux and ue == 1:
            k_max -= 1
        if k_max < cl.start:
            return None
        k_hi = k_max
    if k_hi is not None and k_lo > k_hi:
        return None
    return (max(k_lo, cl.start), k_hi)


def _envelope_below(cl: Cluster, key: Key) -> int:
    """Smallest k with term(k) plus window allowance strictly below key.

    Valid for above-clusters when pos(key) > limit; the envelope
    term(k) + window(k) is strictly decreasing in k, so binary search works.
    """

    def below(k: int) -> bool:
        w = cl.window(k) if cl.children else Q(0)
        return (cl.term(k) + w, 0) < key

    if below(cl.start):
        return cl.start
    step = 1
    hi = cl.start + step
    while not below(hi):
        step *= 2
        hi = cl.start + step
    lo = cl.start  # invariant: not below(lo) and below(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _with_include(cl: Cluster, flag: bool) -> Cluster:
    if cl.include_limit == flag:
        return cl
    return Cluster(cl.limit, cl.above, cl.rule, cl.start, flag, cl.children)


def _cluster_minus_spans(cl: Cluster, spans: list[Span]):
    """Decompose cl minus a span union into (clusters, points). Exact.

    Raises UnrepresentableResult when the remainder would need more than
    MATERIALIZE_CAP explicit components.
    """
    if not cl.above:
        rcl = _cluster_reflect(cl)
        rclusters, rpoints = _cluster_minus_spans(rcl, _reflect_spans(spans))
        return [_cluster_reflect(c) for c in rclusters], [-p for p in rpoints]

    include = cl.include_limit and not _span_contains(spans, cl.limit)
    hull_lo, hull_hi = cl.hull()
    relevant = _span_intersect(spans, [(hull_lo, hull_hi)])
    if not relevant:
        return [_with_include(cl, include)], []

    covered: list[tuple[int, Optional[int]]] = []
    for u, v in relevant:
        r = _covered_index_range(cl, u, v)
        if r is not None:
            covered.append(r)

    survivors: list[tuple[int, int]] = []
    cur: Optional[int] = cl.start
    for k_lo, k_hi in sorted(covered, key=lambda r: r[0]):
        if cur is None:
            break
        if k_lo > cur:
            survivors.append((cur, k_lo - 1))
        if k_hi is None:
            cur = None
        else:
            cur = max(cur, k_hi + 1)
    tail_start = cur  # None when a span swallows the tail

    out_clusters: list[Cluster] = []
    out_points: list[Fraction] = []

    if tail_start is not None:
        lowest = relevant[0][0]
        if cl.children:
            # push the tail start until child windows clear every span
            safe = _envelope_below(cl, lowest)
            if safe > tail_start:
                survivors.append((tail_start, safe - 1))
                tail_start = safe
        out_clusters.append(_with_include(cluster_tail(cl, tail_start), include))
    elif include:
        out_points.append(cl.limit)

    total = 0
    for k_lo, k_hi in survivors:
        total += k_hi - k_lo + 1
        if total > MATERIALIZE_CAP:
            raise UnrepresentableResult(
                "difference needs too many explicit components")
        for k in range(k_lo, k_hi + 1):
            kind, obj = materialize_index(cl, k)
            if kind == "point":
                if not _span_contains(spans, obj):
                    out_points.append(obj)
            else:
                w = cl.window(k)
                t = cl.term(k)
                if not _span_overlaps(spans, (t - w, 0), (t + w, 0)):
                    out_clusters.append(obj)
                else:
                    sub_c, sub_p = _cluster_minus_spans(obj, spans)
                    out_clusters.extend(sub_c)
                    out_points.extend(sub_p)
    return out_clusters, out_points


def _cluster_minus_term_indices(cl: Cluster, indices: list[int]):
    """Remove the set elements sitting exactly at the given term positions.

    A bare index loses its term point; a child index loses the copy's
    included limit (the anchor) when present.
    """
    if not indices:
        return [cl], []
    kmax = max(indices)
    if kmax - cl.start + 1 > MATERIALIZE_CAP:
        raise UnrepresentableResult(
            "difference needs too many explicit components")
    drop = set(indices)
    out_clusters: list[Cluster] = [cluster_tail(cl, kmax + 1)]
    out_points: list[Fraction] = []
    for k in range(cl.start, kmax + 1):
        kind, obj = materialize_index(cl, k)
        if kind == "point":
            if k not in drop:
                out_points.append(obj)
        else:
            if k in drop:
                obj = _with_include(obj, False)
            out_clusters.append(obj)
    return out_clusters, out_points


def _cluster_intersects_span(cl: Cluster, s: Span) -> bool:
    """Exact test: does any element of the cluster lie in the key-range s?"""
    if cl.include_limit and s[0] <= (cl.limit, 0) <= s[1]:
        return True
    if not cl.above:
        rs = _reflect_spans([s])[0]
        return _cluster_intersects_span(_cluster_reflect(cl), rs)
    r = _covered_index_range(cl, s[0], s[1])
    if r is not None:
        k_lo, k_hi = r
        if k_hi is None:
            # infinitely many terms in range: bare terms, or whole shrinking
            # copies, eventually lie strictly inside
            return True
        for k in range(k_lo, k_hi + 1):
            if cl.block_at(k) is None:
                return True
            if _cluster_intersects_span(placed_child(cl, k), s):
                return True
    # a child window can straddle a range edge without its term inside
    for edge in (s[0], s[1]):
        pos = edge[0]
        off = pos - cl.limit
        if off <= 0:
            continue
        k1 = _max_k_offset_ge(cl.rule, cl.start, off)
        cands = {cl.start} if k1 is None else {k1, k1 + 1}
        for k in cands:
            if k < cl.start or cl.block_at(k) is None:
                continue
            if abs(pos - cl.term(k)) <= cl.window(k):
                if _cluster_intersects_span(placed_child(cl, k), s):
                    return True
    return False


# --------------------------------------------------------------------------
# the RealSet


@dataclass(frozen=True)
class RealSet:
    intervals: tuple[Interval, ...] = ()
    points: tuple[Fraction, ...] = ()
    clusters: tuple[Cluster, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (self.intervals or self.points or self.clusters)

    def member(self, x) -> bool:
        x = Q(x)
        if _span_contains(self._spans(), x):
            return True
        return any(cluster_member(c, x) for c in self.clusters)

    def bounds(self) -> tuple[Fraction, Fraction]:
        """(inf, sup); raises EmptySet on the empty set."""
        if self.is_empty:
            raise EmptySet("the empty set has no bounds")
        los: list[Fraction] = []
        his: list[Fraction] = []
        for iv in self.intervals:
            los.append(iv.lo)
            his.append(iv.hi)
        if self.points:
            los.append(self.points[0])
            his.append(self.points[-1])
        for c in self.clusters:
            los.append(c.inf())
            his.append(c.sup())
        return min(los), max(his)

    def is_compact_rep(self) -> bool:
        """Closed and bounded as represented: every interval closed and
        every cluster limit, at every depth, included."""

        def closed_cluster(c: Cluster) -> bool:
            return c.include_limit and all(closed_cluster(b.template)
                                           for b in c.children)

        return (all(iv.lo_closed and iv.hi_closed for iv in self.intervals)
                and all(closed_cluster(c) for c in self.clusters))

    def is_finite(self) -> bool:
        return not self.intervals and not self.clusters

    def component_count(self) -> int:
        return len(self.intervals) + len(self.points) + len(self.clusters)

    def _spans(self) -> list[Span]:
        spans = [iv.span() for iv in self.intervals]
        spans.extend(((p, 0), (p, 0)) for p in self.points)
        return sorted(spans)


EMPTY = RealSet()


def _dedup_limit_flags(clusters: list[Cluster]) -> list[Cluster]:
    """Keep at most one include_limit flag per shared limit position,
    resolving ties by canonical (sorted) order."""
    seen: set[Fraction] = set()
    out = []
    for c in clusters:
        if c.include_limit:
            if c.limit in seen:
                c = _with_include(c, False)
            else:
                seen.add(c.limit)
        out.append(c)
    return out


def _from_spans_and_clusters(spans: list[Span], clusters: list[Cluster]) -> RealSet:
    intervals: list[Interval] = []
    points: list[Fraction] = []
    for s in spans:
        kind, obj = _span_to_part(s)
        if kind == "point":
            points.append(obj)
        else:
            intervals.append(obj)
    clusters = sorted(clusters, key=lambda c: (c.inf(), c.sup(), not c.above,
                                               repr(c.rule)))
    clusters = _dedup_limit_flags(clusters)
    return RealSet(tuple(intervals), tuple(points), tuple(clusters))


def _same_family(a: Rule, b: Rule) -> bool:
    return type(a) is type(b)


def _geom_power_shift(a: Geometric, b: Geometric) -> Optional[int]:
    """d with a.c == b.c * b.q**d when it exists (same q assumed)."""
    v = a.c / b.c
    if v == 1:
        return 0
    q = a.q
    d = 0
    if v < 1:
        while v < 1:
            v = v / q
            d += 1
    else:
        while v > 1:
            v = v * q
            d -= 1
    return d if v == 1 else None


def _merge_same_side_clusters(a: Cluster, b: Cluster) -> Optional[Cluster]:
    """Exact union of two same-limit same-side clusters when one term set
    contains the other; None when no safe merge exists."""
    if a.children or b.children:
        return None
    if not _same_family(a.rule, b.rule):
        return None
    inc = a.include_limit or b.include_limit
    if isinstance(a.rule, Harmonic):
        def subset(x: Cluster, y: Cluster) -> bool:
            # x's term c_x/k equals y's term at index m = k*(c_y/c_x); x is
            # contained in y iff that ratio is a positive integer and the
            # smallest mapped index reaches y.start
            r = y.rule.c / x.rule.c
            return r.denominator == 1 and r >= 1 and r.numerator * x.start >= y.start

        if subset(a, b):
            return _with_include(b, inc)
        if subset(b, a):
            return _with_include(a, inc)
        return None
    if isinstance(a.rule, Geometric):
        if a.rule.q != b.rule.q:
            return None
        d = _geom_power_shift(a.rule, b.rule)
        if d is None:
            return None
        # a's term at index k equals b's term at index k + d
        if a.start + d >= b.start:
            return _with_include(b, inc)
        if b.start - d >= a.start:
            return _with_include(a, inc)
        return None
    return None


def _hulls_overlap(a: Cluster, b: Cluster) -> bool:
    alo, ahi = a.hull()
    blo, bhi = b.hull()
    return alo <= bhi and blo <= ahi


def normalize(intervals: Iterable[Interval] = (), points: Iterable = (),
              clusters: Iterable[Cluster] = ()) -> RealSet:
    """Canonical RealSet from raw parts describing their union."""
    spans: list[Span] = [iv.span() for iv in intervals]
    spans.extend(((Q(p), 0), (Q(p), 0)) for p in points)
    spans = _merge_spans(spans)

    work = [_canonical_cluster(c) for c in clusters]
    final_clusters: list[Cluster] = []
    guard = 0
    while work:
        guard += 1
        if guard > 10_000:
            raise OverlappingClusterWindows("cluster normalization did not settle")
        cl = work.pop()
        parts, pts2 = _cluster_minus_spans(cl, spans)
        if pts2:
            spans = _merge_spans(spans + [((p, 0), (p, 0)) for p in pts2])
            work.extend(parts)
            continue
        requeued = False
        for c in parts:
            if requeued:
                work.append(c)
                continue
            conflict = None
            for i, other in enumerate(final_clusters):
                if not _hulls_overlap(c, other):
                    continue
                if c.limit == other.limit and c.above == other.above:
                    merged = _merge_same_side_clusters(c, other)
                    if merged is not None:
                        conflict = (i, merged)
                        break
                    if (isinstance(c.rule, Geometric)
                            and isinstance(other.rule, Geometric)
                            and c.rule.q == other.rule.q
                            and _geom_power_shift(c.rule, other.rule) is None):
                        continue  # provably disjoint interleaved ladders
                    raise OverlappingClusterWindows(
                        "same-limit clusters with entangled term sets")
                raise OverlappingClusterWindows(
                    "cluster hulls overlap; the representation requires "
                    "separated clusters")
            if conflict is None:
                final_clusters.append(c)
            else:
                i, merged = conflict
                final_clusters.pop(i)
                work.append(merged)
                requeued = True

    # drop points redundant with clusters; absorb limit coincidences
    if spans and final_clusters:
        keep_spans: list[Span] = []
        for s in spans:
            kind, obj = _span_to_part(s)
            if kind != "point":
                keep_spans.append(s)
                continue
            p = obj
            absorbed = False
            for i, c in enumerate(final_clusters):
                if cluster_member(c, p):
                    absorbed = True
                    break
                if p == c.limit and not c.include_limit:
                    final_clusters[i] = _with_include(c, True)
                    absorbed = True
                    break
            if not absorbed:
                keep_spans.append(s)
        spans = keep_spans

    return _from_spans_and_clusters(spans, final_clusters)


def realset(intervals=(), points=(), clusters=()) -> RealSet:
    return normalize(intervals, points, clusters)


# --------------------------------------------------------------------------
# boolean operations


def set_union(a: RealSet, b: RealSet) -> RealSet:
    return normalize(a.intervals + b.intervals, a.points + b.points,
                     a.clusters + b.clusters)


def _cluster_cluster_diff(a: Cluster, b: Cluster):
    """Parts of a minus b, both normalized clusters."""
    if not _hulls_overlap(a, b):
        if a.include_limit and cluster_member(b, a.limit):
            return [_with_include(a, False)], []
        return [a], []
    if a.limit == b.limit and a.above == b.above:
        if a.children or b.children:
            raise UnrepresentableResult(
                "difference of nested same-limit clusters is not supported")
        inc = a.include_limit and not b.include_limit
        if _same_family(a.rule, b.rule) and isinstance(a.rule, Harmonic):
            # a's term c_a/k equals b's term at index m = k*(c_b/c_a)
            ratio = b.rule.c / a.rule.c
            p, q = ratio.numerator, ratio.denominator
            if ratio >= 1 and q == 1:
                # beyond a threshold every a-term is a b-term
                k_thresh = max(a.start, -(-b.start // p))  # ceil(b.start/p)
                pts = [a.term(k) for k in range(a.start, k_thresh)]
                if inc:
                    pts.append(a.limit)
                return [], pts
            raise UnrepresentableResult(
                "harmonic difference leaves a term set outside the class")
        if _same_family(a.rule, b.rule) and isinstance(a.rule, Geometric):
            if a.rule.q != b.rule.q:
                raise UnrepresentableResult(
                    "geometric difference with mismatched ratios")
            d = _geom_power_shift(a.rule, b.rule)
            if d is None:
                return [_with_include(a, inc)], []  # provably disjoint
            # a's term at k equals b's term at k + d; dead once k + d >= b.start
            k_dead = max(a.start, b.start - d)
            pts = [a.term(k) for k in range(a.start, k_dead)]
            if inc:
                pts.append(a.limit)
            return [], pts
        raise UnrepresentableResult(
            "same-limit cross-family difference is not decidable here")
    if a.limit == b.limit:  # opposite sides: only the limit can coincide
        if a.include_limit and b.include_limit:
            return [_with_include(a, False)], []
        return [a], []
    # different limits: finitely many term coincidences
    sep = abs(a.limit - b.limit) / 2
    hits: list[int] = []
    k_far = _max_k_offset_ge(a.rule, a.start, sep)
    if k_far is not None:
        if k_far - a.start + 1 > MATERIALIZE_CAP:
            raise UnrepresentableResult("coincidence scan too large")
        for k in range(a.start, k_far + 1):
            if a.block_at(k) is None and cluster_member(b, a.term(k)):
                hits.append(k)
    kb_far = _max_k_offset_ge(b.rule, b.start, sep)
    if kb_far is not None:
        if kb_far - b.start + 1 > MATERIALIZE_CAP:
            raise UnrepresentableResult("coincidence scan too large")
        for m in range(b.start, kb_far + 1):
            if b.block_at(m) is not None:
                continue
            x = b.term(m)
            off = x - a.limit if a.above else a.limit - x
            if off <= 0:
                continue
            k1 = _max_k_offset_ge(a.rule, a.start, off)
            cands = {a.start} if k1 is None else {k1, k1 + 1}
            for k in cands:
                if (k >= a.start and a.block_at(k) is None
                        and a.term(k) == x and k not in hits):
                    hits.append(k)
    res_c, res_p = ([a], []) if not hits else _cluster_minus_term_indices(a, hits)
    if a.include_limit and cluster_member(b, a.limit):
        res_c = [_with_include(c, False) if c.limit == a.limit else c
                 for c in res_c]
        res_p = [p for p in res_p if p != a.limit]
    return res_c, res_p


def set_diff(a: RealSet, b: RealSet) -> RealSet:
    b_spans = b._spans()
    spans = _span_diff(a._spans(), b_spans)
    out_intervals: list[Interval] = []
    out_points: list[Fraction] = []
    for s in spans:
        kind, obj = _span_to_part(s)
        if kind == "point":
            if not any(cluster_member(c, obj) for c in b.clusters):
                out_points.append(obj)
            continue
        if not b.clusters:
            out_intervals.append(obj)
            continue
        # removing cluster elements from interval mass: endpoint hits trim
        # the interval; interior hits leave holes outside the class
        (sx, se), (sy, sye) = s
        if se == 0 and any(cluster_member(c, sx) for c in b.clusters):
            se = 1
        if sye == 0 and any(cluster_member(c, sy) for c in b.clusters):
            sye = -1
        trimmed = ((sx, se), (sy, sye))
        for c in b.clusters:
            if _cluster_intersects_span(c, trimmed):
                raise UnrepresentableResult(
                    "removing cluster points from an interval leaves holes "
                    "outside the class")
        kind2, obj2 = _span_to_part(trimmed)
        if kind2 == "point":
            out_points.append(obj2)
        else:
            out_intervals.append(obj2)
    out_clusters: list[Cluster] = []
    for c in a.clusters:
        parts_c, parts_p = _cluster_minus_spans(c, b_spans)
        for bc in b.clusters:
            next_c: list[Cluster] = []
            for pc in parts_c:
                r_c, r_p = _cluster_cluster_diff(pc, bc)
                next_c.extend(r_c)
                parts_p.extend(r_p)
            parts_c = next_c
        parts_p = [p for p in parts_p
                   if not any(cluster_member(bc, p) for bc in b.clusters)]
        out_clusters.extend(parts_c)
        out_points.extend(parts_p)
    return normalize(out_intervals, out_points, out_clusters)


def _complement_spans(spans: list[Span], lo: Key, hi: Key) -> list[Span]:
    return _span_diff([(lo, hi)], spans)


def _cluster_intersect_spans(cl: Cluster, spans: list[Span]):
    lo, hi = cl.hull()
    if cl.include_limit:
        lo = min(lo, (cl.limit, 0))
        hi = max(hi, (cl.limit, 0))
    comp = _complement_spans(spans, lo, hi)
    return _cluster_minus_spans(cl, comp)


def _cluster_cluster_intersect(a: Cluster, b: Cluster):
    """Parts of the intersection of two clusters."""
    pts: list[Fraction] = []
    if a.include_limit and cluster_member(b, a.limit):
        pts.append(a.limit)
    if b.include_limit and b.limit != a.limit and cluster_member(a, b.limit):
        pts.append(b.limit)
    if not _hulls_overlap(a, b):
        return [], pts
    if a.limit == b.limit and a.above == b.above:
        if a.children or b.children:
            raise UnrepresentableResult(
                "intersection of nested same-limit clusters is not supported")
        inc = a.include_limit and b.include_limit
        if _same_family(a.rule, b.rule) and isinstance(a.rule, Harmonic):
            # shared terms: c_a/k = c_b/m needs m = k*(c_b/c_a) = k*p/q
            # integral, so the shared a-indices are the multiples of q
            ratio = b.rule.c / a.rule.c
            p, q = ratio.numerator, ratio.denominator
            t0 = max(-(-a.start // q), -(-b.start // p), 1)
            return [Cluster(a.limit, a.above, Harmonic(a.rule.c / q), t0,
                            inc, ())], []
        if _same_family(a.rule, b.rule) and isinstance(a.rule, Geometric):
            if a.rule.q != b.rule.q:
                raise UnrepresentableResult(
                    "geometric intersection with mismatched ratios")
            d = _geom_power_shift(a.rule, b.rule)
            if d is None:
                return [], [a.limit] if inc else []
            k0 = max(a.start, b.start - d)
            return [cluster_tail(_with_include(a, inc), k0)], []
        raise UnrepresentableResult(
            "same-limit cross-family intersection is not decidable here")
    if a.limit == b.limit:
        return [], pts
    # different limits: finitely many coincidences
    sep = abs(a.limit - b.limit) / 2
    for src, dst in ((a, b), (b, a)):
        k_far = _max_k_offset_ge(src.rule, src.start, sep)
        if k_far is None:
            continue
        if k_far - src.start + 1 > MATERIALIZE_CAP:
            raise UnrepresentableResult("coincidence scan too large")
        for k in range(src.start, k_far + 1):
            if src.block_at(k) is None:
                x = src.term(k)
                if cluster_member(dst, x) and x not in pts:
                    pts.append(x)
    return [], pts


def set_intersect(a: RealSet, b: RealSet) -> RealSet:
    a_spans = a._spans()
    b_spans = b._spans()
    spans = _span_intersect(a_spans, b_spans)
    out_clusters: list[Cluster] = []
    out_points: list[Fraction] = []
    for c in a.clusters:
        pc, pp = _cluster_intersect_spans(c, b_spans)
        out_clusters.extend(pc)
        out_points.extend(pp)
        for bc in b.clusters:
            ic, ip = _cluster_cluster_intersect(c, bc)
            out_clusters.extend(ic)
            out_points.extend(ip)
    for c in b.clusters:
        pc, pp = _cluster_intersect_spans(c, a_spans)
        out_clusters.extend(pc)
        out_points.extend(pp)
    ivs: list[Interval] = []
    pts: list[Fraction] = list(out_points)
    for s in spans:
        kind, obj = _span_to_part(s)
        if kind == "point":
            pts.append(obj)
        else:
            ivs.append(obj)
    return normalize(ivs, pts, out_clusters)


def slice_le(h: RealSet, y) -> RealSet:
    """h intersected with (-inf, y]."""
    y = Q(y)
    if h.is_empty:
        return EMPTY
    lo, _hi = h.bounds()
    box = RealSet((Interval(min(lo, y) - 1, y, True, True),), (), ())
    return set_intersect(h, box)


def slice_ge(h: RealSet, y) -> RealSet:
    """h intersected with [y, +inf)."""
    y = Q(y)
    if h.is_empty:
        return EMPTY
    _lo, hi = h.bounds()
    box = RealSet((Interval(y, max(hi, y) + 1, True, True),), (), ())
    return set_intersect(h, box)


def subset_of(a: RealSet, b: RealSet) -> bool:
    return set_diff(a, b).is_empty


def intersects_interval(h: RealSet, iv: Interval) -> bool:
    """Exact test: does h meet the interval?"""
    s = iv.span()
    if _span_intersect(h._spans(), [s]):
        return True
    return any(_cluster_intersects_span(c, s) for c in h.clusters)


# --------------------------------------------------------------------------
# affine images


def translate(h: RealSet, x) -> RealSet:
    return _affine_image(h, Q(1), Q(x))


def scale(h: RealSet, a) -> RealSet:
    a = Q(a)
    if a == 0:
        raise ZeroScale("scaling a set by zero is not invertible")
    return _affine_image(h, a, Q(0))


def reflect(h: RealSet, s=0) -> RealSet:
    """Reflection around the point s: x -> 2s - x."""
    return _affine_image(h, Q(-1), 2 * Q(s))


def _affine_image(h: RealSet, a: Fraction, b: Fraction) -> RealSet:
    ivs = []
    for iv in h.intervals:
        lo, hi = a * iv.lo + b, a * iv.hi + b
        lc, hc = iv.lo_closed, iv.hi_closed
        if a < 0:
            lo, hi, lc, hc = hi, lo, hc, lc
        ivs.append(Interval(lo, hi, lc, hc))
    pts = [a * p + b for p in h.points]
    cls = [cluster_affine(c, a, b) for c in h.clusters]
    return normalize(ivs, pts, cls)


# --------------------------------------------------------------------------
# topology


def closure(h: RealSet) -> RealSet:
    def close_cluster(c: Cluster) -> Cluster:
        children = tuple(ChildBlock(b.lo, b.hi, close_cluster(b.template))
                         for b in c.children)
        return Cluster(c.limit, c.above, c.rule, c.start, True, children)

    ivs = [Interval(iv.lo, iv.hi, True, True) for iv in h.intervals]
    return normalize(ivs, h.points, [close_cluster(c) for c in h.clusters])


def interior(h: RealSet) -> RealSet:
    ivs = [Interval(iv.lo, iv.hi, False, False)
           for iv in h.intervals if iv.lo < iv.hi]
    return normalize(ivs, (), ())


def derived(h: RealSet) -> RealSet:
    """The set of accumulation points (the classical derived set)."""
    ivs = [Interval(iv.lo, iv.hi, True, True) for iv in h.intervals]
    pts: list[Fraction] = []
    cls: list[Cluster] = []
    for c in h.clusters:
        dp, dc = _derived_cluster(c)
        pts.extend(dp)
        cls.extend(dc)
    return normalize(ivs, pts, cls)


def _derived_cluster(c: Cluster):
    """(points, clusters) decomposition of the derived set of one cluster."""
    pts: list[Fraction] = [c.limit]
    cls: list[Cluster] = []
    for b in c.children:
        tpl = b.template
        if b.hi is not None:
            for k in range(b.lo, b.hi + 1):
                if tpl.depth == 1:
                    pts.append(c.term(k))
                else:
                    sub_p, sub_c = _derived_cluster(placed_child(c, k))
                    pts.extend(sub_p)
                    cls.extend(sub_c)
            continue
        # unbounded block: the anchors themselves accumulate at the limit
        anchors = cluster_tail(c, b.lo)
        if tpl.depth == 1:
            cls.append(Cluster(anchors.limit, anchors.above, anchors.rule,
                               anchors.start, True, ()))
        else:
            sub_p, sub_c = _derived_cluster(tpl)
            if len(sub_c) == 1 and all(p == tpl.limit for p in sub_p):
                sub = sub_c[0]
            else:
                raise UnrepresentableResult(
                    "derived set of this nesting shape is not supported")
            cls.append(Cluster(anchors.limit, anchors.above, anchors.rule,
                               anchors.start, True,
                               (ChildBlock(anchors.start, None, sub),)))
    return pts, cls


def derived_iter(h: RealSet, n: int) -> RealSet:
    if n < 0:
        raise BadParameters("derived iteration count must be >= 0")
    cur = h
    for _ in range(n):
        cur = derived(cur)
    return cur


def level(h: RealSet) -> int:
    """Largest n with the n-th derived set nonempty.

    Finite point sets have level 0; a depth-d cluster contributes level d;
    interval mass makes every derived set nonempty.
    """
    if h.is_empty:
        raise EmptySet("level of the empty set is undefined")
    if h.intervals:
        raise InfiniteLevel("interval components make every derived set nonempty")
    if not h.clusters:
        return 0
    return max(c.depth for c in h.clusters)


def acc_bounds(h: RealSet) -> tuple[Fraction, Fraction]:
    """(inf, sup) of the derived set: the accumulation bounds."""
    d = derived(h)
    if d.is_empty:
        raise EmptyDerivedSet("finite sets have no accumulation points")
    return d.bounds()


# --------------------------------------------------------------------------
# convenience constructors


def from_interval(lo, hi, lo_closed=True, hi_closed=True) -> RealSet:
    return normalize([Interval(Q(lo), Q(hi), lo_closed, hi_closed)])


def from_points(*xs) -> RealSet:
    return normalize((), [Q(x) for x in xs], ())


def harmonic_cluster(limit, c=1, start=1, above=True, include_limit=False,
                     children=()) -> Cluster:
    return make_cluster(Q(limit), above, Harmonic(Q(c)), start, include_limit,
                        children)


def geometric_cluster(limit, c, q, start=1, above=True, include_limit=False,
                      children=()) -> Cluster:
    return make_cluster(Q(limit), above, Geometric(Q(c), Q(q)), start,
                        include_limit, children)
