"""Randomized and exact checkers for the mean properties in the catalogue.

Each property has an operational predicate over one mean and one or more
sets. ``check`` runs canonical instances first (known witnesses and known
theorem families), then seeded random trials, and reports one of three
verdicts: ``holds_on_sample`` (no violation found on the evidence),
``counterexample`` (a re-verified witness is attached), or
``not_applicable`` (the mean lacks the structure the property talks about,
or no generated input ever satisfied the premise).

Sampling never proves a universal; the verdicts say exactly what was
checked. Properties whose definitions are operational reconstructions
rather than first-class definitions are flagged ``reconstructed`` in the
report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .analysis import (
    acc_points_by_mean,
    grid_family,
    liminf_by_mean,
    limsup_by_mean,
)
from .errors import (
    BadConfig,
    BadParameters,
    MeanlabError,
    NoConvergence,
    NotApplicable,
    UnsupportedMean,
)
from .exactset import (
    RealSet,
    acc_bounds,
    closure,
    derived,
    from_interval,
    from_points,
    geometric_cluster,
    harmonic_cluster,
    realset,
    reflect,
    scale,
    set_diff,
    set_intersect,
    set_union,
    slice_ge,
    slice_le,
    translate,
)
from .limits import DEFAULT_SCHEDULE, LimitSchedule, limit_estimate
from .means import MeanRef
from .measure import DensityMeasure, fatten, lebesgue
from .values import (
    Approx,
    RootValue,
    value_bounds,
    value_le,
    value_lt_strict,
    value_mid,
    values_close,
)

Q = Fraction

_TOL = Q(1, 2 ** 40)


# --------------------------------------------------------------------------
# configuration, reports, witnesses


@dataclass(frozen=True)
class GeneratorConfig:
    """Bounds for the random set generators."""

    max_intervals: int = 3
    max_points: int = 3
    max_clusters: int = 2
    coord_den: int = 8
    coord_range: int = 8
    max_redraws: int = 60
    schedule: LimitSchedule = DEFAULT_SCHEDULE

    def __post_init__(self):
        if (self.max_intervals < 1 or self.max_points < 1
                or self.max_clusters < 1 or self.coord_den < 1
                or self.coord_range < 1 or self.max_redraws < 1):
            raise BadConfig("generator bounds must be positive")


@dataclass(frozen=True)
class Witness:
    """Replayable counterexample: the inputs plus the labeled exact values.

    ``replays`` holds (thunk, expected) pairs used to re-verify the witness
    before a report is emitted; they are not part of equality or
    serialization.
    """

    sets: tuple[RealSet, ...]
    values: tuple[tuple[str, object], ...]
    note: str = ""
    replays: tuple = field(default=(), repr=False, compare=False)


@dataclass(frozen=True)
class PropertyReport:
    property_id: str
    mean_id: str
    verdict: str  # holds_on_sample | counterexample | not_applicable
    trials: int
    seed: int
    witness: Optional[Witness]
    reconstructed: bool


class _Skip(Exception):
    """Trial could not be carried out (premise miss or domain exit)."""


def _slack(k: MeanRef) -> Fraction:
    return Q(0) if k.exact else _TOL


def _eq(k: MeanRef, a, b) -> bool:
    if k.exact and isinstance(a, (Fraction, int)) and isinstance(b, (Fraction, int)):
        return a == b
    return values_close(a, b, max(_slack(k), Q(1, 2 ** 70)))


def _le_holds(k: MeanRef, a, b) -> bool:
    """Absence of a certified violation of a <= b."""
    return value_le(a, b, _slack(k))


def _lt_certain(a, b, tol: Fraction = Q(0)) -> bool:
    return value_lt_strict(a, b, tol)


def _num(v) -> Fraction:
    return v if isinstance(v, Fraction) else value_mid(v)


def _err(v) -> Fraction:
    lo, hi = value_bounds(v)
    return (hi - lo) / 2


def _shift_value(v, x: Fraction):
    if isinstance(v, Fraction):
        return v + x
    lo, hi = value_bounds(v)
    return Approx((lo + hi) / 2 + x, (hi - lo) / 2)


def _scale_value(v, a: Fraction):
    if isinstance(v, Fraction):
        return a * v
    lo, hi = value_bounds(v)
    mid, rad = (lo + hi) / 2, (hi - lo) / 2
    return Approx(a * mid, abs(a) * rad)


def _reflect_value(v, s: Fraction):
    return _shift_value(_scale_value(v, Q(-1)), 2 * s)


def _ev(k: MeanRef, h: RealSet):
    """Evaluate, turning any engine error into a skipped trial."""
    try:
        return k.evaluate(h)
    except MeanlabError:
        raise _Skip


def _wit(note: str, sets, values, replays=()) -> Witness:
    return Witness(tuple(sets), tuple(values), note, tuple(replays))


def _replay(k: MeanRef, h: RealSet, expected):
    return (lambda: k.evaluate(h)), expected


# --------------------------------------------------------------------------
# random generators


def _rand_frac(rng: random.Random, cfg: GeneratorConfig,
               lo=None, hi=None) -> Fraction:
    lo = Q(-cfg.coord_range) if lo is None else Q(lo)
    hi = Q(cfg.coord_range) if hi is None else Q(hi)
    den = rng.randint(1, cfg.coord_den)
    nlo = (lo * den).__ceil__()
    nhi = (hi * den).__floor__()
    if nhi < nlo:
        nhi = nlo
    return Q(rng.randint(nlo, nhi), den)


def _rand_cuts(rng, cfg, count: int, lo, hi) -> list[Fraction]:
    seen: set[Fraction] = set()
    guard = 0
    while len(seen) < count:
        seen.add(_rand_frac(rng, cfg, lo, hi))
        guard += 1
        if guard > 50 * count:
            raise _Skip
    return sorted(seen)


def _shape_points(rng, cfg, lo=None, hi=None) -> RealSet:
    m = rng.randint(2, cfg.max_points + 1)
    return from_points(*_rand_cuts(rng, cfg, m, lo, hi))


def _shape_union(rng, cfg, *, closed_only=False, lo=None, hi=None,
                 n_min=1) -> RealSet:
    m = rng.randint(n_min, cfg.max_intervals)
    cuts = _rand_cuts(rng, cfg, 2 * m, lo, hi)
    ivs = []
    for i in range(m):
        a, b = cuts[2 * i], cuts[2 * i + 1]
        if closed_only:
            lc = hc = True
        else:
            lc, hc = rng.random() < 0.8, rng.random() < 0.8
        ivs.append(from_interval(a, b, lc, hc))
    out = ivs[0]
    for iv in ivs[1:]:
        out = set_union(out, iv)
    return out


def _shape_union_satellites(rng, cfg) -> RealSet:
    base = _shape_union(rng, cfg)
    lo, hi = base.bounds()
    sats = []
    for _ in range(rng.randint(1, cfg.max_points)):
        if rng.random() < 0.5:
            sats.append(lo - _rand_frac(rng, cfg, Q(1, 2), 3))
        else:
            sats.append(hi + _rand_frac(rng, cfg, Q(1, 2), 3))
    return set_union(base, from_points(*sats))


def _shape_clusters(rng, cfg) -> RealSet:
    n = rng.randint(1, cfg.max_clusters)
    limits = rng.sample(range(-cfg.coord_range, cfg.coord_range), n)
    cls = []
    pts = []
    for lim in limits:
        lim = Q(lim)
        above = rng.random() < 0.7
        include = rng.random() < 0.5
        if rng.random() < 0.5:
            cls.append(harmonic_cluster(lim, c=Q(1, 2), start=2, above=above,
                                        include_limit=include))
        else:
            cls.append(geometric_cluster(lim, c=Q(1, 4), q=Q(1, 2), start=1,
                                         above=above, include_limit=include))
        if rng.random() < 0.4:
            pts.append(lim + (Q(3, 4) if above else Q(-3, 4)))
    return realset(points=pts, clusters=cls)


def _shape_mix(rng, cfg) -> RealSet:
    u = _shape_union(rng, cfg)
    lo, hi = u.bounds()
    extra = from_points(lo - 1, hi + 1)
    return set_union(u, extra)


def _candidate(rng, cfg) -> RealSet:
    shape = rng.randrange(6)
    if shape == 0:
        return _shape_points(rng, cfg)
    if shape == 1:
        return _shape_union(rng, cfg)
    if shape == 2:
        return _shape_union_satellites(rng, cfg)
    if shape == 3:
        return _shape_clusters(rng, cfg)
    if shape == 4:
        return _shape_union(rng, cfg, lo=Q(1, 2), hi=cfg.coord_range + 1)
    return _shape_mix(rng, cfg)


def _support_hull(mu: DensityMeasure) -> tuple[Fraction, Fraction]:
    return mu.pieces[0][0].lo, mu.pieces[-1][0].hi


def _sample_domain_set(k: MeanRef, cfg: GeneratorConfig,
                       rng: random.Random) -> RealSet:
    for _ in range(cfg.max_redraws):
        if isinstance(k.param, DensityMeasure):
            lo, hi = _support_hull(k.param)
            h = _shape_union(rng, cfg, lo=lo, hi=hi)
        else:
            h = _candidate(rng, cfg)
        if not h.is_empty and k.in_domain(h):
            return h
    raise _Skip


def _place_right(rng, cfg, a: RealSet, b: RealSet, *,
                 allow_touch: bool = False) -> RealSet:
    gap = Q(0) if (allow_touch and rng.random() < 0.3) else \
        Q(1, rng.randint(1, cfg.coord_den))
    return translate(b, a.bounds()[1] + gap - b.bounds()[0])


def _sample_pair_apart(k: MeanRef, cfg, rng, *, allow_touch=False
                       ) -> tuple[RealSet, RealSet]:
    a = _sample_domain_set(k, cfg, rng)
    b = _sample_domain_set(k, cfg, rng)
    b = _place_right(rng, cfg, a, b, allow_touch=allow_touch)
    if not set_intersect(a, b).is_empty:
        raise _Skip
    return a, b


def _disjoint_parts_in_domain(k: MeanRef, cfg, rng, count: int
                              ) -> tuple[RealSet, ...]:
    """``count`` pairwise-disjoint domain sets.

    Means carrying a density measure get interval unions drawn inside
    disjoint windows of the measure's support (appending a set beyond the
    support would exit the domain); other means chain sets rightwards.
    """
    if isinstance(k.param, DensityMeasure):
        lo, hi = _support_hull(k.param)
        w = (hi - lo) / count
        pad = w / 8
        parts = []
        for slot in range(count):
            a = lo + slot * w
            h = _shape_union(rng, cfg, lo=a + pad, hi=a + w - pad)
            if h.is_empty or not k.in_domain(h):
                raise _Skip
            # Coarse coordinate grids can round a cut past its window,
            # so disjointness is enforced rather than assumed.
            if any(not set_intersect(h, p).is_empty for p in parts):
                raise _Skip
            parts.append(h)
        return tuple(parts)
    parts = [_sample_domain_set(k, cfg, rng)]
    for _ in range(count - 1):
        p = _place_right(rng, cfg, parts[-1], _sample_domain_set(k, cfg, rng))
        parts.append(p)
    return tuple(parts)


# public generator streams (deterministic under a fixed seed)


def gen_sets(cfg: GeneratorConfig, seed: int) -> Iterator[RealSet]:
    """Deterministic stream of assorted RealSets."""
    rng = random.Random(seed)
    while True:
        try:
            yield _candidate(rng, cfg)
        except _Skip:
            continue


def gen_disjoint_pairs(cfg: GeneratorConfig, seed: int
                       ) -> Iterator[tuple[RealSet, RealSet]]:
    rng = random.Random(seed)
    while True:
        try:
            a = _candidate(rng, cfg)
            b = _place_right(rng, cfg, a, _candidate(rng, cfg))
        except _Skip:
            continue
        if set_intersect(a, b).is_empty:
            yield a, b


def gen_equal_mean_pairs(cfg: GeneratorConfig, seed: int
                         ) -> Iterator[tuple[RealSet, RealSet]]:
    """Disjoint pairs with equal length-averages: the second set straddles
    the first set's average symmetrically from outside its hull."""
    from .means import avg1

    rng = random.Random(seed)
    while True:
        try:
            h1 = _shape_union(rng, cfg)
        except _Skip:
            continue
        v = avg1(h1)
        lo, hi = h1.bounds()
        t = max(v - lo, hi - v) + _rand_frac(rng, cfg, 1, 3)
        w = _rand_frac(rng, cfg, Q(1, 4), 2)
        h2 = set_union(from_interval(v - t - w, v - t),
                       from_interval(v + t, v + t + w))
        if set_intersect(h1, h2).is_empty:
            yield h1, h2


def gen_nested_chain(j: int) -> RealSet:
    """[0,1] together with a right block shrinking toward the point 2."""
    if j < 0:
        raise BadParameters("chain index must be >= 0")
    return set_union(from_interval(Q(0), Q(1)),
                     from_interval(Q(2), Q(2) + Q(1, 2 ** j)))


def gen_dilution(cfg: GeneratorConfig, seed: int
                 ) -> Iterator[tuple[Callable[[int], tuple[RealSet, RealSet]], Fraction]]:
    """Families (n -> (H_n, L_n), a) of growing finite sets H_n with
    arithmetic mean a and small removed parts L_n, |L_n|/|H_n| -> 0."""
    rng = random.Random(seed)
    while True:
        a = _rand_frac(rng, cfg)
        r = Q(rng.randint(1, 2), 2)

        def make(n: int, a=a, r=r) -> tuple[RealSet, RealSet]:
            pts = [a + r * Q(i, n) for i in range(-n, n + 1)]
            h = from_points(*pts)
            cut = max(1, round(n ** 0.25))
            rem = from_points(*pts[:cut])
            return h, rem

        yield make, a


# --------------------------------------------------------------------------
# limit comparison helper


def _limit_matches(k: MeanRef, sampler: Callable[[int], Fraction], target,
                   schedule: LimitSchedule) -> Optional[bool]:
    """True: the limit provably matches the target within tolerances.
    False: the limit is clearly separated from the target.
    None: inconclusive (no convergence or ambiguous gap)."""
    try:
        est = limit_estimate(sampler, schedule, label="property limit")
    except NoConvergence:
        return None
    except MeanlabError:
        return None
    pad = _slack(k) + _TOL
    if values_close(est, target, pad):
        return True
    e_lo, e_hi = value_bounds(est)
    t_lo, t_hi = value_bounds(target)
    sep = max(t_lo - e_hi, e_lo - t_hi)
    if sep > 3 * est.error + pad:
        return False
    return None


# --------------------------------------------------------------------------
# property checkers (one random trial each; Witness = counterexample)


def _c_internal(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    v = _ev(k, h)
    lo, hi = h.bounds()
    if _le_holds(k, lo, v) and _le_holds(k, v, hi):
        return None
    return _wit("mean escapes [inf, sup]", (h,),
                (("K(H)", v), ("inf", lo), ("sup", hi)),
                (_replay(k, h, v),))


def _c_strict_internal(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    try:
        li, ls = acc_bounds(h)
    except MeanlabError:
        raise _Skip
    v = _ev(k, h)
    if _le_holds(k, li, v) and _le_holds(k, v, ls):
        return None
    return _wit("mean escapes [liminf, limsup]", (h,),
                (("K(H)", v), ("liminf", li), ("limsup", ls)),
                (_replay(k, h, v),))


def _c_strong_internal(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    v = _ev(k, h)
    try:
        li = liminf_by_mean(k, h)
        ls = limsup_by_mean(k, h)
    except MeanlabError:
        raise _Skip
    if _le_holds(k, li, v) and _le_holds(k, v, ls):
        return None
    return _wit("mean escapes its own [liminf, limsup]", (h,),
                (("K(H)", v), ("liminf_K", li), ("limsup_K", ls)),
                (_replay(k, h, v),))


def _c_strict_strong_internal(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    v = _ev(k, h)
    try:
        li = liminf_by_mean(k, h)
        ls = limsup_by_mean(k, h)
    except MeanlabError:
        raise _Skip
    if not (_le_holds(k, li, v) and _le_holds(k, v, ls)):
        return _wit("mean escapes its own [liminf, limsup]", (h,),
                    (("K(H)", v), ("liminf_K", li), ("limsup_K", ls)),
                    (_replay(k, h, v),))
    if values_close(li, ls, _slack(k)):
        return None
    if k.exact and isinstance(v, Fraction) and isinstance(li, Fraction) \
            and isinstance(ls, Fraction):
        if li < v < ls:
            return None
        return _wit("bounds differ but sandwich is not strict", (h,),
                    (("K(H)", v), ("liminf_K", li), ("limsup_K", ls)),
                    (_replay(k, h, v),))
    if _lt_certain(v, li) or _lt_certain(ls, v):
        return _wit("bounds differ but sandwich is not strict", (h,),
                    (("K(H)", v), ("liminf_K", li), ("limsup_K", ls)),
                    (_replay(k, h, v),))
    return None


def _c_monotone(k, cfg, rng):
    a, b = _sample_pair_apart(k, cfg, rng, allow_touch=True)
    u = set_union(a, b)
    va, vb, vu = _ev(k, a), _ev(k, b), _ev(k, u)
    if _le_holds(k, va, vu) and _le_holds(k, vu, vb):
        return None
    return _wit("ordered pair breaks the sandwich K(H1)<=K(U)<=K(H2)",
                (a, b, u),
                (("K(H1)", va), ("K(H2)", vb), ("K(H1uH2)", vu)),
                (_replay(k, a, va), _replay(k, b, vb), _replay(k, u, vu)))


def _c_disjoint_monotone(k, cfg, rng):
    a, b = _sample_pair_apart(k, cfg, rng)
    va, vb = _ev(k, a), _ev(k, b)
    if _lt_certain(vb, va):
        a, b, va, vb = b, a, vb, va
    elif not _le_holds(k, va, vb):
        raise _Skip
    u = set_union(a, b)
    vu = _ev(k, u)
    if _le_holds(k, va, vu) and _le_holds(k, vu, vb):
        return None
    return _wit("disjoint value-ordered pair breaks the sandwich",
                (a, b, u),
                (("K(H1)", va), ("K(H2)", vb), ("K(H1uH2)", vu)),
                (_replay(k, a, va), _replay(k, b, vb), _replay(k, u, vu)))


def _c_union_monotone(k, cfg, rng):
    a = _sample_domain_set(k, cfg, rng)
    b = _place_right(rng, cfg, a, _sample_domain_set(k, cfg, rng))
    c = _place_right(rng, cfg, b, _sample_domain_set(k, cfg, rng))
    if not set_intersect(b, c).is_empty:
        raise _Skip
    ab, ac = set_union(a, b), set_union(a, c)
    abc = set_union(ab, c)
    va, vab, vac, vabc = _ev(k, a), _ev(k, ab), _ev(k, ac), _ev(k, abc)
    up = _le_holds(k, va, vab) and _le_holds(k, va, vac) \
        and not _lt_certain(vab, va) and not _lt_certain(vac, va)
    down = _le_holds(k, vab, va) and _le_holds(k, vac, va) \
        and not _lt_certain(va, vab) and not _lt_certain(va, vac)
    if up and not _le_holds(k, va, vabc):
        return _wit("both enlargements raise the mean but the joint one "
                    "lowers it", (a, b, c),
                    (("K(A)", va), ("K(AuB)", vab), ("K(AuC)", vac),
                     ("K(AuBuC)", vabc)),
                    (_replay(k, a, va), _replay(k, abc, vabc)))
    if down and not _le_holds(k, vabc, va):
        return _wit("both enlargements lower the mean but the joint one "
                    "raises it", (a, b, c),
                    (("K(A)", va), ("K(AuB)", vab), ("K(AuC)", vac),
                     ("K(AuBuC)", vabc)),
                    (_replay(k, a, va), _replay(k, abc, vabc)))
    if not (up or down):
        raise _Skip
    return None


def _c_mean_monotone(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    v = _ev(k, h)
    vnum = _num(v)
    low = _sample_domain_set(k, cfg, rng)
    margin = _rand_frac(rng, cfg, 0, 2)
    low = translate(low, vnum - margin - low.bounds()[1])
    up = _sample_domain_set(k, cfg, rng)
    up = translate(up, vnum + margin - up.bounds()[0])
    u1, u2 = set_union(h, low), set_union(h, up)
    v1, v2 = _ev(k, u1), _ev(k, u2)
    if _le_holds(k, v1, v) and _le_holds(k, v, v2):
        return None
    return _wit("adjoining a set below (above) the mean fails to pull it "
                "down (up)", (h, low, up),
                (("K(H)", v), ("K(HuL)", v1), ("K(HuU)", v2)),
                (_replay(k, h, v), _replay(k, u1, v1), _replay(k, u2, v2)))


def _c_equi_monotone(k, cfg, rng):
    kind = k.kind()
    if kind == "avg1":
        h1 = _shape_union(rng, cfg)
        v = _ev(k, h1)
        lo, hi = h1.bounds()
        t = max(v - lo, hi - v) + _rand_frac(rng, cfg, 1, 3)
        w = _rand_frac(rng, cfg, Q(1, 4), 2)
        h2 = set_union(from_interval(v - t - w, v - t),
                       from_interval(v + t, v + t + w))
    elif kind == "amean":
        h1 = _shape_points(rng, cfg)
        v = _ev(k, h1)
        lo, hi = h1.bounds()
        t = max(v - lo, hi - v) + _rand_frac(rng, cfg, 1, 3)
        h2 = from_points(v - t, v + t)
    else:
        h1, h2 = _sample_pair_apart(k, cfg, rng)
        v = _ev(k, h1)
    if not set_intersect(h1, h2).is_empty:
        raise _Skip
    u = set_union(h1, h2)
    vu = _ev(k, u)
    if not _eq(k, vu, v):
        raise _Skip  # premise K(H1 u H2) = K(H1) not met
    v2 = _ev(k, h2)
    if _eq(k, v2, v):
        return None
    return _wit("union keeps the mean but the parts disagree",
                (h1, h2, u),
                (("K(H1)", v), ("K(H2)", v2), ("K(H1uH2)", vu)),
                (_replay(k, h1, v), _replay(k, h2, v2), _replay(k, u, vu)))


def _slice_points_of_interest(h: RealSet) -> list[Fraction]:
    xs: set[Fraction] = set(h.points)
    for iv in h.intervals:
        xs.add(iv.lo)
        xs.add(iv.hi)
    for c in h.clusters:
        xs.add(c.limit)
    return sorted(xs)


def _c_slice_continuous(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    lo, hi = h.bounds()
    xs = [x for x in _slice_points_of_interest(h) if lo < x <= hi]
    if not xs:
        raise _Skip
    x0 = rng.choice(xs)
    sched = cfg.schedule
    if rng.random() < 0.5 and lo <= x0 < hi:
        base_set = slice_ge(h, x0)
        sampler = lambda n: _num(k.evaluate(slice_ge(h, x0 + Q(1, n))))
        side = "right"
    else:
        base_set = slice_le(h, x0)
        sampler = lambda n: _num(k.evaluate(slice_le(h, x0 - Q(1, n))))
        side = "left"
    try:
        base = k.evaluate(base_set)
    except MeanlabError:
        raise _Skip
    verdict = _limit_matches(k, sampler, base, sched)
    if verdict is None or verdict:
        if verdict is None:
            raise _Skip
        return None
    probe = slice_le(h, x0 - Q(1, sched.indices[-1])) if side == "left" \
        else slice_ge(h, x0 + Q(1, sched.indices[-1]))
    vp = _ev(k, probe)
    return _wit(f"slice value jumps approaching {x0} from the {side}",
                (h, probe),
                ((f"K(slice at {x0})", base), ("K(nearby slice)", vp)),
                (_replay(k, base_set, base), _replay(k, probe, vp)))


def _c_point_continuous(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    xs = _slice_points_of_interest(h)
    for iv in h.intervals:
        xs.append((iv.lo + iv.hi) / 2)
    if not xs:
        raise _Skip
    x0 = rng.choice(sorted(set(xs)))
    base = _ev(k, h)
    sched = cfg.schedule

    def sampler(n: int) -> Fraction:
        rem = set_diff(h, from_interval(x0 - Q(1, n), x0 + Q(1, n),
                                        False, False))
        return _num(k.evaluate(rem))

    verdict = _limit_matches(k, sampler, base, sched)
    if verdict is None:
        raise _Skip
    if verdict:
        return None
    probe = set_diff(h, from_interval(x0 - Q(1, sched.indices[-1]),
                                      x0 + Q(1, sched.indices[-1]),
                                      False, False))
    vp = _ev(k, probe)
    return _wit(f"removing a vanishing ball at {x0} moves the mean",
                (h, probe), (("K(H)", base), ("K(H-ball)", vp)),
                (_replay(k, h, base), _replay(k, probe, vp)))


def _chain_family(k, cfg, rng, *, compact_only: bool):
    """(chain(n) -> RealSet, intersection RealSet) for a nested decreasing
    family; chains shrink as n grows."""
    a = _shape_union(rng, cfg, closed_only=True) if rng.random() < 0.7 \
        else _shape_points(rng, cfg)
    c = a.bounds()[1] + _rand_frac(rng, cfg, Q(1, 2), 2)
    style = rng.randrange(2 if compact_only else 3)
    if style == 0:
        chain = lambda n: set_union(a, from_interval(c, c + Q(1, n)))
        inter = set_union(a, from_points(c))
    elif style == 1:
        chain = lambda n: set_union(
            a, realset(clusters=[harmonic_cluster(c, start=max(2, n),
                                                  include_limit=True)]))
        inter = set_union(a, from_points(c))
    else:
        chain = lambda n: set_union(
            a, realset(clusters=[harmonic_cluster(c, start=max(2, n))]))
        inter = a
    return chain, inter


def _c_cantor_continuous(k, cfg, rng, *, compact_only=False):
    chain, inter = _chain_family(k, cfg, rng, compact_only=compact_only)
    try:
        target = k.evaluate(inter)
    except MeanlabError:
        raise _Skip
    sched = cfg.schedule
    sampler = lambda n: _num(k.evaluate(chain(n)))
    verdict = _limit_matches(k, sampler, target, sched)
    if verdict is None:
        raise _Skip
    if verdict:
        return None
    last = chain(sched.indices[-1])
    vl = _ev(k, last)
    return _wit("means along the nested chain do not approach the mean of "
                "the intersection", (inter, last),
                (("K(intersection)", target), ("K(deep chain member)", vl)),
                (_replay(k, inter, target), _replay(k, last, vl)))


def _c_cantor_continuous_compact(k, cfg, rng):
    return _c_cantor_continuous(k, cfg, rng, compact_only=True)


def _c_u_cantor_continuous(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    base = _ev(k, h)
    sched = cfg.schedule
    if h.intervals:
        top = h.intervals[-1]
        w = top.hi - top.lo

        def sampler(n: int) -> Fraction:
            part = set_diff(h, from_interval(top.hi - w / n, top.hi,
                                             False, False))
            return _num(k.evaluate(part))
    else:
        def sampler(n: int) -> Fraction:
            return _num(k.evaluate(h))
    verdict = _limit_matches(k, sampler, base, sched)
    if verdict is None:
        raise _Skip
    if verdict:
        return None
    part = set_diff(h, from_interval(h.intervals[-1].hi - (h.intervals[-1].hi - h.intervals[-1].lo) / sched.indices[-1],
                                     h.intervals[-1].hi, False, False))
    vp = _ev(k, part)
    return _wit("partial unions of the slab decomposition do not approach "
                "the full mean", (h, part),
                (("K(H)", base), ("K(partial union)", vp)),
                (_replay(k, h, base), _replay(k, part, vp)))


def _c_hausdorff_continuous(k, cfg, rng):
    a = _shape_union(rng, cfg, closed_only=True)
    lo, hi = a.bounds()
    if lo == hi:
        raise _Skip
    limit_set = from_interval(lo, hi)

    def family(m: int) -> RealSet:
        pts = [lo + (hi - lo) * Q(i, m) for i in range(m + 1)]
        return set_union(a, from_points(*pts))

    return _hausdorff_trial(k, cfg, family, limit_set)


def _hausdorff_trial(k, cfg, family, limit_set):
    try:
        target = k.evaluate(limit_set)
    except MeanlabError:
        raise _Skip
    sched = cfg.schedule
    sampler = lambda m: _num(k.evaluate(family(m)))
    verdict = _limit_matches(k, sampler, target, sched)
    if verdict is None:
        raise _Skip
    if verdict:
        return None
    deep = family(sched.indices[-1])
    vd = k.evaluate(deep)
    return _wit("means along the Hausdorff-convergent family stay away "
                "from the mean of the limit set", (limit_set, deep),
                (("K(limit)", target), ("K(deep member)", vd)),
                (_replay(k, limit_set, target), _replay(k, deep, vd)))


def _c_finite_independent(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    v = _ev(k, h)
    pool = list(h.points)
    lo, hi = h.bounds()
    outside = [lo - _rand_frac(rng, cfg, Q(1, 2), 2),
               hi + _rand_frac(rng, cfg, Q(1, 2), 2)]
    fpts = []
    if pool and rng.random() < 0.6:
        fpts.append(rng.choice(pool))
    fpts.extend(rng.sample(outside, rng.randint(1, 2)))
    f = from_points(*fpts)
    removed = set_diff(h, f)
    added = set_union(h, f)
    checked = []
    for other, label in ((removed, "K(H-F)"), (added, "K(HuF)")):
        if other.is_empty or not k.in_domain(other):
            continue
        vo = _ev(k, other)
        checked.append((other, label, vo))
        if not _eq(k, vo, v):
            return _wit("a finite modification moves the mean",
                        (h, f, other), (("K(H)", v), (label, vo)),
                        (_replay(k, h, v), _replay(k, other, vo)))
    if not checked:
        raise _Skip
    return None


def _c_closed(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    c = closure(h)
    if c == h:
        return None  # already closed: the property is trivially satisfied
    if not k.in_domain(c):
        raise _Skip
    v, vc = _ev(k, h), _ev(k, c)
    if _eq(k, vc, v):
        return None
    return _wit("taking the closure moves the mean", (h, c),
                (("K(H)", v), ("K(cl H)", vc)),
                (_replay(k, h, v), _replay(k, c, vc)))


def _c_accumulated(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    d = derived(h)
    if d.is_empty or not k.in_domain(d):
        raise _Skip
    v, vd = _ev(k, h), _ev(k, d)
    if _eq(k, vd, v):
        return None
    return _wit("the mean of the derived set differs", (h, d),
                (("K(H)", v), ("K(H')", vd)),
                (_replay(k, h, v), _replay(k, d, vd)))


def _c_self_accumulated(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    try:
        acc = acc_points_by_mean(k, h)
    except UnsupportedMean:
        raise NotApplicable(
            f"no structural accumulation-point evaluation for {k.id}")
    except MeanlabError:
        raise _Skip
    if acc.is_empty or not k.in_domain(acc):
        raise _Skip
    v, va = _ev(k, h), _ev(k, acc)
    if _eq(k, va, v):
        return None
    return _wit("the mean of the mean-accumulation set differs", (h, acc),
                (("K(H)", v), ("K(H'_K)", va)),
                (_replay(k, h, v), _replay(k, acc, va)))


def _c_convex(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    v = _ev(k, h)
    vlo, vhi = value_bounds(v)
    m_lo = _rand_frac(rng, cfg, Q(1, 4), 3)
    m_hi = _rand_frac(rng, cfg, Q(1, 4), 3)
    ilo, ihi = vlo - m_lo, vhi + m_hi
    if rng.random() < 0.5:
        ell = _shape_union(rng, cfg, lo=ilo, hi=ihi)
    else:
        ell = _shape_points(rng, cfg, lo=ilo, hi=ihi)
    u = set_union(h, ell)
    if not k.in_domain(u):
        raise _Skip
    vu = _ev(k, u)
    if _le_holds(k, ilo, vu) and _le_holds(k, vu, ihi):
        return None
    return _wit("adjoining a subset of an interval around the mean pushes "
                "the mean outside that interval", (h, ell, u),
                (("K(H)", v), ("K(HuL)", vu), ("I_lo", ilo), ("I_hi", ihi)),
                (_replay(k, h, v), _replay(k, u, vu)))


def _c_translation_invariant(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    x = _rand_frac(rng, cfg, -3, 3)
    if x == 0:
        raise _Skip
    g = translate(h, x)
    if not k.in_domain(g):
        raise _Skip
    v, vg = _ev(k, h), _ev(k, g)
    if _eq(k, vg, _shift_value(v, x)):
        return None
    return _wit(f"translating by {x} does not shift the mean by {x}",
                (h, g), (("K(H)", v), ("K(H+x)", vg)),
                (_replay(k, h, v), _replay(k, g, vg)))


def _c_reflection_invariant(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    s = _rand_frac(rng, cfg, -3, 3)
    g = reflect(h, s)
    if not k.in_domain(g):
        raise _Skip
    v, vg = _ev(k, h), _ev(k, g)
    if _eq(k, vg, _reflect_value(v, s)):
        return None
    return _wit(f"reflecting about {s} does not reflect the mean",
                (h, g), (("K(H)", v), ("K(2s-H)", vg)),
                (_replay(k, h, v), _replay(k, g, vg)))


def _c_homogeneous(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    a = _rand_frac(rng, cfg, Q(1, 4), 4)
    if a in (0, 1):
        raise _Skip
    g = scale(h, a)
    if not k.in_domain(g):
        raise _Skip
    v, vg = _ev(k, h), _ev(k, g)
    if _eq(k, vg, _scale_value(v, a)):
        return None
    return _wit(f"scaling by {a} does not scale the mean", (h, g),
                (("K(H)", v), ("K(aH)", vg)),
                (_replay(k, h, v), _replay(k, g, vg)))


def _abs_frac(x: Fraction) -> Fraction:
    return -x if x < 0 else x


def _u_bounded_core(k, h, parts):
    """|K(H) - K(H u all parts)| <= sum |K(H) - K(H u part)|, with
    uncertainty slack for inexact values."""
    v = _ev(k, h)
    total = h
    rhs = Q(0)
    slack = _err(v) * (len(parts) + 1)
    vals = [("K(H)", v)]
    replays = [_replay(k, h, v)]
    for i, p in enumerate(parts):
        u = set_union(h, p)
        if not k.in_domain(u):
            raise _Skip
        vu = _ev(k, u)
        rhs += _abs_frac(_num(v) - _num(vu))
        slack += 2 * _err(vu)
        vals.append((f"K(HuH{i + 1})", vu))
        replays.append(_replay(k, u, vu))
        total = set_union(total, p)
    if not k.in_domain(total):
        raise _Skip
    vt = _ev(k, total)
    lhs = _abs_frac(_num(v) - _num(vt))
    slack += _err(vt)
    vals.append(("K(H u all)", vt))
    replays.append(_replay(k, total, vt))
    if lhs <= rhs + slack + _slack(k):
        return None
    return _wit("the joint deviation exceeds the sum of the single "
                "deviations", (h, *parts), tuple(vals), tuple(replays))


def _c_u_bounded(k, cfg, rng):
    h, p1, p2 = _disjoint_parts_in_domain(k, cfg, rng, 3)
    if not isinstance(k.param, DensityMeasure) and rng.random() < 0.3:
        lo = h.bounds()[0]
        p2 = translate(p2, lo - 1 - p2.bounds()[1])
    if not (set_intersect(h, p1).is_empty and set_intersect(h, p2).is_empty
            and set_intersect(p1, p2).is_empty):
        raise _Skip
    return _u_bounded_core(k, h, (p1, p2))


def _c_u_bounded_overlap(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    p1 = _place_right(rng, cfg, h, _sample_domain_set(k, cfg, rng))
    shift = _rand_frac(rng, cfg, 0, (p1.bounds()[1] - p1.bounds()[0]) or 1)
    p2 = translate(p1, shift)
    if not (set_intersect(h, p1).is_empty and set_intersect(h, p2).is_empty):
        raise _Skip
    if set_intersect(p1, p2).is_empty:
        raise _Skip  # this variant wants overlapping appendages
    return _u_bounded_core(k, h, (p1, p2))


def _c_u_bounded_n_fold(k, cfg, rng):
    n = rng.randint(3, 6)
    h, *parts = _disjoint_parts_in_domain(k, cfg, rng, n + 1)
    for i, p in enumerate(parts):
        if not set_intersect(h, p).is_empty:
            raise _Skip
        for q in parts[i + 1:]:
            if not set_intersect(p, q).is_empty:
                raise _Skip
    return _u_bounded_core(k, h, tuple(parts))


def _c_u_bounded_infinite(k, cfg, rng):
    h = _sample_domain_set(k, cfg, rng)
    base = h.bounds()[1] + _rand_frac(rng, cfg, Q(1, 2), 2)
    c = harmonic_cluster(base, c=Q(1, 2), start=2)
    tail = realset(clusters=[c])
    full = set_union(h, tail)
    if not k.in_domain(full):
        raise _Skip
    v, vf = _ev(k, h), _ev(k, full)
    lhs = _abs_frac(_num(v) - _num(vf))
    slack = _err(v) + _err(vf) + _slack(k)
    partial = Q(0)
    zero_streak = 0
    for i in range(2, 42):
        u = set_union(h, from_points(c.term(i)))
        if not k.in_domain(u):
            raise _Skip
        vu = _ev(k, u)
        term = _abs_frac(_num(v) - _num(vu))
        partial += term
        slack += 2 * _err(vu)
        zero_streak = zero_streak + 1 if term == 0 else 0
        if lhs <= partial + slack:
            return None
    if zero_streak >= 5:
        return _wit("the single-append deviations vanish but the full "
                    "append moves the mean", (h, full),
                    (("K(H)", v), ("K(H u tail)", vf),
                     ("partial sum", partial)),
                    (_replay(k, h, v), _replay(k, full, vf)))
    raise _Skip


# --------------------------------------------------------------------------
# canonical instances (paper-grade witnesses and theorem families)


def _harmonic_set(limit=Q(0), start=1, include=False) -> RealSet:
    return realset(clusters=[harmonic_cluster(Q(limit), start=start,
                                              include_limit=include)])


def _canonical_trials(property_id: str, k: MeanRef, cfg: GeneratorConfig
                      ) -> list[Callable[[], Optional[Witness]]]:
    kind = k.kind()
    out: list[Callable[[], Optional[Witness]]] = []

    def simple_pair(note, h, other, label):
        def run():
            if not (k.in_domain(h) and k.in_domain(other)):
                raise _Skip
            v, vo = _ev(k, h), _ev(k, other)
            if _eq(k, vo, v):
                return None
            return _wit(note, (h, other), (("K(H)", v), (label, vo)),
                        (_replay(k, h, v), _replay(k, other, vo)))
        return run

    if property_id == "strict_internal":
        if kind == "eds":
            def run_eds():
                h = _harmonic_set()
                if not k.in_domain(h):
                    raise _Skip
                v = _ev(k, h)
                li, ls = acc_bounds(h)
                if _le_holds(k, li, v) and _le_holds(k, v, ls):
                    return None
                return _wit("mean escapes [liminf, limsup]", (h,),
                            (("K(H)", v), ("liminf", li), ("limsup", ls)),
                            (_replay(k, h, v),))
            out.append(run_eds)
        if kind == "avg_fat" and isinstance(k.param, Fraction):
            d = k.param

            def run_fat():
                h = set_union(from_points(Q(0)),
                              from_interval(2 * d, 3 * d))
                v = _ev(k, h)
                li, ls = acc_bounds(h)
                if _le_holds(k, li, v) and _le_holds(k, v, ls):
                    return None
                return _wit("mean escapes [liminf, limsup]", (h,),
                            (("K(H)", v), ("liminf", li), ("limsup", ls)),
                            (_replay(k, h, v),))
            out.append(run_fat)

    if property_id == "monotone" and kind == "iso" and isinstance(k.param, int):
        n = k.param

        def run_iso():
            p = 2 * (n + 3)
            h1 = realset(points=[Q(0), Q(p), Q(p) - Q(1, 2 * n)],
                         clusters=[harmonic_cluster(Q(0), start=n)])
            h2 = realset(points=[Q(p)],
                         clusters=[harmonic_cluster(Q(p), start=n)])
            u = set_union(h1, h2)
            v1, v2, vu = _ev(k, h1), _ev(k, h2), _ev(k, u)
            if _le_holds(k, v1, vu) and _le_holds(k, vu, v2):
                return None
            return _wit("ordered pair breaks the sandwich "
                        "K(H1)<=K(U)<=K(H2)", (h1, h2, u),
                        (("K(H1)", v1), ("K(H2)", v2), ("K(H1uH2)", vu)),
                        (_replay(k, h1, v1), _replay(k, h2, v2),
                         _replay(k, u, vu)))
        out.append(run_iso)

    if property_id == "equi_monotone" and kind == "m_acc":
        def run_macc():
            h1 = _harmonic_set()
            h2 = from_points(Q(2))
            u = set_union(h1, h2)
            v, vu, v2 = _ev(k, h1), _ev(k, u), _ev(k, h2)
            if not _eq(k, vu, v):
                raise _Skip
            if _eq(k, v2, v):
                return None
            return _wit("union keeps the mean but the parts disagree",
                        (h1, h2, u),
                        (("K(H1)", v), ("K(H2)", v2), ("K(H1uH2)", vu)),
                        (_replay(k, h1, v), _replay(k, h2, v2),
                         _replay(k, u, vu)))
        out.append(run_macc)

    if property_id == "slice_continuous" and kind == "eds":
        def run_eds_slice():
            h = from_points(Q(0), Q(1), Q(2), Q(3))
            if not k.in_domain(h):
                raise _Skip
            base = _ev(k, h)  # the slice at 3 is the whole set
            sampler = lambda n: _num(k.evaluate(slice_le(h, 3 - Q(1, n))))
            verdict = _limit_matches(k, sampler, base, cfg.schedule)
            if verdict is None:
                raise _Skip
            if verdict:
                return None
            probe = slice_le(h, 3 - Q(1, cfg.schedule.indices[-1]))
            vp = _ev(k, probe)
            return _wit("slice value jumps approaching 3 from the left",
                        (h, probe),
                        (("K(slice at 3)", base), ("K(nearby slice)", vp)),
                        (_replay(k, h, base), _replay(k, probe, vp)))
        out.append(run_eds_slice)

    if property_id == "closed" and kind == "eds":
        h = set_union(from_points(Q(0), Q(3)),
                      from_interval(Q(1), Q(2), False, False))
        out.append(simple_pair("taking the closure moves the mean",
                               h, closure(h), "K(cl H)"))

    if property_id == "finite_independent":
        if kind == "eds":
            h = from_points(Q(0), Q(1), Q(2), Q(3))
            out.append(simple_pair("a finite modification moves the mean",
                                   h, set_diff(h, from_points(Q(0))),
                                   "K(H-F)"))
        if kind == "avg_fat" and isinstance(k.param, Fraction):
            d = k.param
            h = set_union(from_points(Q(0)), from_interval(2 * d, 3 * d))
            out.append(simple_pair("a finite modification moves the mean",
                                   h, set_diff(h, from_points(Q(0))),
                                   "K(H-F)"))

    if property_id == "cantor_continuous" and kind == "avg_fat" \
            and isinstance(k.param, Fraction):
        d = k.param

        def run_fat_chain():
            p = 1 + 2 * d
            chain = lambda n: set_union(
                from_points(p),
                realset(clusters=[harmonic_cluster(Q(0), start=max(2, n))]))
            inter = from_points(p)
            target = _ev(k, inter)
            sampler = lambda n: _num(k.evaluate(chain(n)))
            verdict = _limit_matches(k, sampler, target, cfg.schedule)
            if verdict is None:
                raise _Skip
            if verdict:
                return None
            last = chain(cfg.schedule.indices[-1])
            vl = _ev(k, last)
            return _wit("means along the nested chain do not approach the "
                        "mean of the intersection", (inter, last),
                        (("K(intersection)", target),
                         ("K(deep chain member)", vl)),
                        (_replay(k, inter, target), _replay(k, last, vl)))
        out.append(run_fat_chain)

    if property_id == "hausdorff_continuous" and kind in (
            "avg1", "lavg", "avg_fat", "m_eds"):
        def run_grid():
            return _hausdorff_trial(k, cfg, grid_family,
                                    from_interval(Q(0), Q(2)))
        out.append(run_grid)

    if property_id == "reflection_invariant" and kind == "eds":
        def run_eds_refl():
            h = from_points(Q(0), Q(1, 2), Q(3))
            if not k.in_domain(h):
                raise _Skip
            s = Q(3, 2)
            g = reflect(h, s)
            v, vg = _ev(k, h), _ev(k, g)
            if _eq(k, vg, _reflect_value(v, s)):
                return None
            return _wit(f"reflecting about {s} does not reflect the mean",
                        (h, g), (("K(H)", v), ("K(2s-H)", vg)),
                        (_replay(k, h, v), _replay(k, g, vg)))
        out.append(run_eds_refl)

    if property_id == "u_bounded_overlap" and kind == "amean":
        def run_amean_overlap():
            h = from_points(Q(0))
            p1 = from_points(Q(-1), Q(1))
            p2 = from_points(Q(-1), Q(2))
            return _u_bounded_core(k, h, (p1, p2))
        out.append(run_amean_overlap)

    if property_id == "translation_invariant" and isinstance(
            k.param, DensityMeasure):
        mu = k.param

        def run_mu_shift():
            lo, hi = _support_hull(mu)
            first = mu.pieces[0][0]
            h = from_interval(first.lo, first.hi)
            x = (hi - first.hi) / 2
            if x == 0:
                raise _Skip
            g = translate(h, x)
            if not (k.in_domain(h) and k.in_domain(g)):
                raise _Skip
            v, vg = _ev(k, h), _ev(k, g)
            if _eq(k, vg, _shift_value(v, x)):
                return None
            return _wit(f"translating by {x} does not shift the mean",
                        (h, g), (("K(H)", v), ("K(H+x)", vg)),
                        (_replay(k, h, v), _replay(k, g, vg)))
        out.append(run_mu_shift)

    if property_id == "homogeneous" and isinstance(k.param, DensityMeasure):
        mu = k.param

        def run_mu_scale():
            last = mu.pieces[-1][0]
            h = from_interval(last.lo, last.hi)
            a = Q(1, 2)
            g = scale(h, a)
            if not (k.in_domain(h) and k.in_domain(g)):
                raise _Skip
            v, vg = _ev(k, h), _ev(k, g)
            if _eq(k, vg, _scale_value(v, a)):
                return None
            return _wit(f"scaling by {a} does not scale the mean", (h, g),
                        (("K(H)", v), ("K(aH)", vg)),
                        (_replay(k, h, v), _replay(k, g, vg)))
        out.append(run_mu_scale)

    return out


# --------------------------------------------------------------------------
# the harness


_CHECKERS: dict[str, Callable] = {
    "internal": _c_internal,
    "strict_internal": _c_strict_internal,
    "strong_internal": _c_strong_internal,
    "strict_strong_internal": _c_strict_strong_internal,
    "monotone": _c_monotone,
    "disjoint_monotone": _c_disjoint_monotone,
    "union_monotone": _c_union_monotone,
    "mean_monotone": _c_mean_monotone,
    "equi_monotone": _c_equi_monotone,
    "slice_continuous": _c_slice_continuous,
    "point_continuous": _c_point_continuous,
    "cantor_continuous": _c_cantor_continuous,
    "cantor_continuous_compact": _c_cantor_continuous_compact,
    "u_cantor_continuous": _c_u_cantor_continuous,
    "hausdorff_continuous": _c_hausdorff_continuous,
    "finite_independent": _c_finite_independent,
    "closed": _c_closed,
    "accumulated": _c_accumulated,
    "self_accumulated": _c_self_accumulated,
    "convex": _c_convex,
    "translation_invariant": _c_translation_invariant,
    "reflection_invariant": _c_reflection_invariant,
    "homogeneous": _c_homogeneous,
    "u_bounded": _c_u_bounded,
    "u_bounded_overlap": _c_u_bounded_overlap,
    "u_bounded_n_fold": _c_u_bounded_n_fold,
    "u_bounded_infinite": _c_u_bounded_infinite,
}

PROPERTY_IDS = tuple(_CHECKERS)

#: properties whose predicates are operational reconstructions from usage
RECONSTRUCTED = frozenset({
    "slice_continuous", "point_continuous", "union_monotone",
    "mean_monotone", "convex", "accumulated",
})


def _verify_witness(w: Witness, exact: bool) -> None:
    for thunk, expected in w.replays:
        got = thunk()
        if exact and isinstance(got, Fraction) and isinstance(expected, Fraction):
            if got != expected:
                raise MeanlabError("witness failed exact replay")
        elif not values_close(got, expected, _TOL):
            raise MeanlabError("witness failed replay within tolerance")


def check(property_id: str, k: MeanRef, gen: GeneratorConfig | None = None,
          trials: int = 200, seed: int = 0) -> PropertyReport:
    """Run canonical instances and seeded random trials of one property
    against one mean; deterministic for fixed arguments."""
    if property_id not in _CHECKERS:
        raise BadParameters(f"unknown property: {property_id!r}")
    if trials < 1:
        raise BadParameters("trials must be >= 1")
    cfg = gen if gen is not None else GeneratorConfig()
    checker = _CHECKERS[property_id]
    rng = random.Random(seed)
    effective = 0
    witness: Optional[Witness] = None
    not_applicable = False

    for trial in _canonical_trials(property_id, k, cfg):
        try:
            w = trial()
        except _Skip:
            continue
        except NotApplicable:
            not_applicable = True
            break
        effective += 1
        if w is not None:
            witness = w
            break

    if witness is None and not not_applicable:
        attempts = 0
        while effective < trials and attempts < 4 * trials:
            attempts += 1
            try:
                w = checker(k, cfg, rng)
            except _Skip:
                continue
            except NotApplicable:
                not_applicable = True
                break
            effective += 1
            if w is not None:
                witness = w
                break

    if witness is not None:
        _verify_witness(witness, k.exact)
        verdict = "counterexample"
    elif not_applicable or effective == 0:
        verdict = "not_applicable"
        witness = None
    else:
        verdict = "holds_on_sample"
    return PropertyReport(property_id, k.id, verdict, effective, seed,
                          witness, property_id in RECONSTRUCTED)


def full_report(k: MeanRef, properties=None, gen: GeneratorConfig | None = None,
                trials: int = 60, seed: int = 0) -> list[PropertyReport]:
    """Run a batch of properties against one mean."""
    props = tuple(properties) if properties is not None else PROPERTY_IDS
    return [check(p, k, gen, trials, seed) for p in props]
