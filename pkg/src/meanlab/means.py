"""The catalogue of generalized means on RealSets.

Every mean takes a RealSet (plus parameters) and returns an exact Fraction
when the defining expression is rational, a RootValue when it is an exact
radical, or an Approx when only a certified/stabilized estimate exists.
Domain violations raise typed errors rather than returning sentinels.

The catalogue is exposed two ways: plain functions (``avg1``, ``eds_n``, ...)
for direct use, and ``MeanRef`` records that bundle a mean with its domain
test and exactness flag so the analysis and property-checking layers can
treat means as first-class values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from .errors import (
    BadParameters,
    DegenerateSet,
    DomainViolation,
    EmptySet,
    EmptySlice,
    MeanlabError,
    NotFinite,
    NullSet,
    UnsupportedDepth,
    UnsupportedMean,
)
from .exactset import (
    Cluster,
    Interval,
    MappedRule,
    RealSet,
    derived,
    derived_iter,
    level,
    normalize,
    set_diff,
)
from .funcs import Affine, Compose, ExpBase, LogBase, MonotoneFunc, OddPower, SquareOnNonneg
from .limits import DEFAULT_SCHEDULE, LimitSchedule, limit_estimate
from .measure import (
    DensityMeasure,
    _merge_index,
    _native_depth1,
    fatten,
    lebesgue,
    moment,
    mu_measure,
    mu_moment,
    support,
)
from .values import Approx, RootValue

Q = Fraction

Value = Union[Fraction, RootValue, Approx]


# --------------------------------------------------------------------------
# finite and interval-mass means


def amean(h: RealSet) -> Fraction:
    """Arithmetic mean of a finite point set."""
    if h.is_empty:
        raise EmptySet("arithmetic mean of the empty set is undefined")
    if not h.is_finite():
        raise NotFinite("arithmetic mean needs a finite point set")
    return sum(h.points, Q(0)) / len(h.points)


def avg1(h: RealSet) -> Fraction:
    """Length-weighted average: first moment over total length."""
    if h.is_empty:
        raise EmptySet("average of the empty set is undefined")
    lam = lebesgue(h)
    if lam == 0:
        raise NullSet("the set carries no length; the average is undefined")
    return moment(h) / lam


def m_mu(mu: DensityMeasure, h: RealSet) -> Fraction:
    """Average against a piecewise-constant density measure."""
    if h.is_empty:
        raise EmptySet("average of the empty set is undefined")
    total = mu_measure(h, mu)
    if total == 0:
        raise NullSet("the set is null for this measure")
    return mu_moment(h, mu) / total


# --------------------------------------------------------------------------
# accumulation-structure means


def m_acc(h: RealSet) -> Fraction:
    """Arithmetic mean of the deepest nonempty derived set."""
    ell = level(h)  # raises InfiniteLevel on interval mass, EmptySet on empty
    return amean(derived_iter(h, ell))


def iso_n(h: RealSet, n: int) -> Fraction:
    """Arithmetic mean of the points surviving outside the open 1/n
    neighborhood of the accumulation points.

    Defined only when the isolated points are dense in the set; within the
    representable class that is a structural condition: interval mass has no
    isolated points at all, while points and cluster terms (at any nesting
    depth) are each a limit of isolated members.
    """
    if n < 1:
        raise BadParameters("the neighborhood stage must be >= 1")
    if h.is_empty:
        raise EmptySet("mean of the empty set is undefined")
    if h.intervals:
        raise DomainViolation(
            "interval mass has no isolated points, so the isolated part "
            "is not dense in the set")
    d = derived(h)
    if d.is_empty:
        return amean(h)  # no accumulation points: nothing is excised
    rem = set_diff(h, fatten(d, Q(1, n)))
    if rem.is_empty:
        raise EmptySlice("no points survive outside the neighborhood")
    return amean(rem)


def m_iso(h: RealSet, schedule: LimitSchedule = DEFAULT_SCHEDULE) -> Approx:
    """Limit of iso_n along the schedule."""
    return limit_estimate(lambda n: iso_n(h, n), schedule, label="iso limit")


def _cell(x: Fraction, a: Fraction, w: Fraction) -> int:
    r = (x - a) / w
    return r.numerator // r.denominator


def _is_cell_boundary(x: Fraction, a: Fraction, w: Fraction) -> bool:
    return ((x - a) / w).denominator == 1


def eds_n(h: RealSet, n: int) -> Fraction:
    """Equal-division mean: split [inf, sup] into n half-open cells
    [a+i*w, a+(i+1)*w), average the left endpoints of occupied cells
    (the supremum occupies its own degenerate cell)."""
    if n < 1:
        raise BadParameters("the division count must be >= 1")
    if h.is_empty:
        raise EmptySet("equal-division mean of the empty set is undefined")
    a, b = h.bounds()
    if a == b:
        raise DegenerateSet("equal-division mean needs a non-degenerate set")
    w = (b - a) / n
    ranges: list[tuple[int, int]] = []

    def add(i_lo: int, i_hi: int) -> None:
        if i_lo <= i_hi:
            ranges.append((i_lo, i_hi))

    for iv in h.intervals:
        i_lo = _cell(iv.lo, a, w)
        if _is_cell_boundary(iv.hi, a, w) and not iv.hi_closed:
            i_hi = _cell(iv.hi, a, w) - 1
        else:
            i_hi = _cell(iv.hi, a, w)
        add(i_lo, i_hi)
    for p in h.points:
        i = _cell(p, a, w)
        add(i, i)
    for c in h.clusters:
        _native_depth1(c)
        k_merge = _merge_index(c.rule, c.start, w)
        for k in range(c.start, k_merge):
            i = _cell(c.term(k), a, w)
            add(i, i)
        t_m = c.term(k_merge)
        if c.above:
            # tail terms descend to the limit without skipping a cell
            lim_cell = _cell(c.limit, a, w)  # the cell just above the limit
            add(lim_cell, _cell(t_m, a, w))
        else:
            if _is_cell_boundary(c.limit, a, w):
                lim_cell = _cell(c.limit, a, w) - 1
            else:
                lim_cell = _cell(c.limit, a, w)
            add(_cell(t_m, a, w), lim_cell)
        if c.include_limit:
            i = _cell(c.limit, a, w)
            add(i, i)
    ranges.sort()
    merged: list[tuple[int, int]] = []
    for lo, hi in ranges:
        if merged and lo <= merged[-1][1] + 1:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    count = 0
    total = Q(0)
    for lo, hi in merged:
        m = hi - lo + 1
        count += m
        total += m * a + w * Q((lo + hi) * m, 2)
    return total / count


def m_eds(h: RealSet, schedule: LimitSchedule = DEFAULT_SCHEDULE) -> Approx:
    """Limit of eds_n along the schedule."""
    return limit_estimate(lambda n: eds_n(h, n), schedule, label="eds limit")


# --------------------------------------------------------------------------
# neighborhood-average means


def avg_fat(h: RealSet, delta) -> Fraction:
    """Length-weighted average of the open delta-neighborhood."""
    return avg1(fatten(h, delta))


def lavg(h: RealSet, schedule: LimitSchedule = DEFAULT_SCHEDULE) -> Value:
    """Limit of avg_fat as the radius shrinks to zero.

    When the set carries length the null parts vanish in the limit and the
    value equals the plain average of the interval mass, returned exactly.
    Otherwise the limit is estimated along the schedule.
    """
    if h.is_empty:
        raise EmptySet("average of the empty set is undefined")
    if h.intervals:
        return avg1(support(h))
    return limit_estimate(lambda n: avg_fat(h, Q(1, n)), schedule,
                          label="shrinking-neighborhood average")


# --------------------------------------------------------------------------
# function-transformed means


def _interval_integral(f: MonotoneFunc, lo: Fraction, hi: Fraction):
    """Integral of f over [lo, hi]; Fraction for exact closed forms,
    (lo_bound, hi_bound) Fraction pair for certified enclosures."""
    if isinstance(f, Affine):
        return f.slope * (hi * hi - lo * lo) / 2 + f.shift * (hi - lo)
    if isinstance(f, OddPower):
        m = f.n + 1
        return (hi ** m - lo ** m) / m
    if isinstance(f, SquareOnNonneg):
        return (hi ** 3 - lo ** 3) / 3
    if isinstance(f, Compose) and isinstance(f.outer, Affine):
        inner = _interval_integral(f.inner, lo, hi)
        if isinstance(inner, tuple):
            a = f.outer.slope
            parts = sorted((a * inner[0], a * inner[1]))
            shift = f.outer.shift * (hi - lo)
            return (parts[0] + shift, parts[1] + shift)
        return f.outer.slope * inner + f.outer.shift * (hi - lo)
    if isinstance(f, Compose) and isinstance(f.inner, Affine):
        # integral of g(a*x + s) over [lo, hi] = (1/a) integral of g(u)
        a, s = f.inner.slope, f.inner.shift
        u1, u2 = sorted((a * lo + s, a * hi + s))
        inner = _interval_integral(f.outer, u1, u2)
        if isinstance(inner, tuple):
            parts = sorted((inner[0] / abs(a), inner[1] / abs(a)))
            return (parts[0], parts[1])
        return inner / abs(a)
    if isinstance(f, ExpBase):
        # integral of b**x = (b**hi - b**lo) / ln(b)
        from mpmath import iv

        from .funcs import FORWARD_BITS, _certified, _frac_to_iv

        base = f.base

        def compute():
            lnb = iv.log(_frac_to_iv(base))
            return (iv.exp(_frac_to_iv(hi) * lnb)
                    - iv.exp(_frac_to_iv(lo) * lnb)) / lnb

        return _certified(compute, FORWARD_BITS)
    if isinstance(f, LogBase):
        # integral of log_b(x) = (x ln x - x) / ln(b)
        if lo <= 0:
            raise DomainViolation("logarithm integral needs a positive domain")
        from mpmath import iv

        from .funcs import FORWARD_BITS, _certified, _frac_to_iv

        base = f.base

        def compute():
            lnb = iv.log(_frac_to_iv(base))
            xhi = _frac_to_iv(hi)
            xlo = _frac_to_iv(lo)
            return ((xhi * iv.log(xhi) - xhi)
                    - (xlo * iv.log(xlo) - xlo)) / lnb

        return _certified(compute, FORWARD_BITS)
    raise BadParameters(
        f"no closed-form integral for transform {f.name()}")


def _as_bounds(v) -> tuple[Fraction, Fraction]:
    if isinstance(v, tuple):
        return v
    return (v, v)


def avg_f(f: MonotoneFunc, h: RealSet) -> Value:
    """Quasi-arithmetic average over length: invert f at the mean of f."""
    if h.is_empty:
        raise EmptySet("average of the empty set is undefined")
    lam = lebesgue(h)
    if lam == 0:
        raise NullSet("the set carries no length; the average is undefined")
    for iv_ in h.intervals:
        if not (f.contains(iv_.lo) and f.contains(iv_.hi)):
            raise DomainViolation("the set leaves the transform's domain")
    lo_sum = Q(0)
    hi_sum = Q(0)
    exact = True
    for iv_ in h.intervals:
        part = _interval_integral(f, iv_.lo, iv_.hi)
        p_lo, p_hi = _as_bounds(part)
        exact = exact and not isinstance(part, tuple)
        lo_sum += p_lo
        hi_sum += p_hi
    if exact:
        return f.invert(lo_sum / lam)
    v_lo, v_hi = lo_sum / lam, hi_sum / lam
    return f.invert(Approx((v_lo + v_hi) / 2, (v_hi - v_lo) / 2))


# --------------------------------------------------------------------------
# conjugation: pull the set through f, evaluate, invert the value


def image_set(h: RealSet, f: MonotoneFunc) -> RealSet:
    """Exact image of a RealSet under an exact monotone transform."""
    if not f.exact:
        raise BadParameters("image sets need an exact transform")
    ivs = []
    for iv_ in h.intervals:
        if not (f.contains(iv_.lo) and f.contains(iv_.hi)):
            raise DomainViolation("the set leaves the transform's domain")
        lo, hi = f.apply(iv_.lo), f.apply(iv_.hi)
        lc, hc = iv_.lo_closed, iv_.hi_closed
        if not f.increasing:
            lo, hi, lc, hc = hi, lo, hc, lc
        ivs.append(Interval(lo, hi, lc, hc))
    pts = []
    for p in h.points:
        if not f.contains(p):
            raise DomainViolation("the set leaves the transform's domain")
        pts.append(f.apply(p))
    cls = []
    for c in h.clusters:
        if c.children:
            raise UnsupportedDepth(
                "images of nested clusters are not supported")
        lo, hi = (c.limit, c.sup()) if c.above else (c.inf(), c.limit)
        if not (f.contains(lo) and f.contains(hi)):
            raise DomainViolation("the set leaves the transform's domain")
        if isinstance(c.rule, MappedRule):
            new_rule = MappedRule(c.rule.base, c.rule.base_limit,
                                  c.rule.base_above, Compose(f, c.rule.func))
        else:
            new_rule = MappedRule(c.rule, c.limit, c.above, f)
        new_above = c.above == f.increasing
        cls.append(Cluster(f.apply(c.limit), new_above, new_rule, c.start,
                           c.include_limit, ()))
    return normalize(ivs, pts, cls)


def invert_value(f: MonotoneFunc, v: Value) -> Value:
    """Pull a mean value back through the transform."""
    return f.invert(v)


# --------------------------------------------------------------------------
# the MeanRef catalogue


@dataclass(frozen=True)
class MeanRef:
    """A named mean bundled with its domain test and exactness flag.

    ``evaluate(h)`` succeeds exactly on sets accepted by
    ``domain_predicate`` (limit means may additionally fail to stabilize,
    which is a convergence report, not a domain fact). ``exact`` promises
    Fraction/RootValue results; otherwise values may be certified Approx.
    ``param`` carries the defining parameter (stage, radius, density,
    transform, schedule) so checkers can reconstruct canonical inputs.
    """

    id: str
    evaluate: Callable[[RealSet], Value]
    domain_predicate: Callable[[RealSet], bool]
    exact: bool
    param: object = None

    def __call__(self, h: RealSet) -> Value:
        return self.evaluate(h)

    def in_domain(self, h: RealSet) -> bool:
        return bool(self.domain_predicate(h))

    def kind(self) -> str:
        """Catalogue family name: the id up to any parameter/transform tag."""
        return self.id.split("^", 1)[0].split(":", 1)[0]


def _domain_by_trial(evaluate: Callable[[RealSet], Value]):
    def pred(h: RealSet) -> bool:
        try:
            evaluate(h)
        except MeanlabError:
            return False
        return True

    return pred


AMEAN = MeanRef(
    "amean", amean,
    lambda h: (not h.is_empty) and h.is_finite(),
    exact=True)

AVG1 = MeanRef(
    "avg1", avg1,
    lambda h: (not h.is_empty) and lebesgue(h) > 0,
    exact=True)

M_ACC = MeanRef(
    "m_acc", m_acc,
    lambda h: (not h.is_empty) and not h.intervals,
    exact=True)


def iso_ref(n: int) -> MeanRef:
    """Stage-n isolated-point mean as a catalogue entry."""
    def ev(h: RealSet) -> Fraction:
        return iso_n(h, n)

    return MeanRef(f"iso:{n}", ev, _domain_by_trial(ev), exact=True, param=n)


def eds_ref(n: int) -> MeanRef:
    """Stage-n equal-division mean as a catalogue entry."""
    def ev(h: RealSet) -> Fraction:
        return eds_n(h, n)

    return MeanRef(f"eds:{n}", ev, _domain_by_trial(ev), exact=True, param=n)


def avg_fat_ref(delta) -> MeanRef:
    """Fixed-radius neighborhood average as a catalogue entry."""
    d = Q(delta)
    if d <= 0:
        raise BadParameters("the neighborhood radius must be positive")

    def ev(h: RealSet) -> Fraction:
        return avg_fat(h, d)

    return MeanRef(f"avg_fat:{d}", ev, _domain_by_trial(ev), exact=True,
                   param=d)


def m_mu_ref(mu: DensityMeasure) -> MeanRef:
    """Density-weighted average as a catalogue entry."""
    def ev(h: RealSet) -> Fraction:
        return m_mu(mu, h)

    tag = ";".join(f"{p.lo},{p.hi},{d}" for p, d in mu.pieces)
    return MeanRef(f"m_mu:{tag}", ev, _domain_by_trial(ev), exact=True,
                   param=mu)


def lavg_ref(schedule: LimitSchedule = DEFAULT_SCHEDULE) -> MeanRef:
    """Shrinking-neighborhood limit average as a catalogue entry."""
    def ev(h: RealSet) -> Value:
        return lavg(h, schedule)

    def dom(h: RealSet) -> bool:
        if h.is_empty:
            return False
        if h.intervals:
            return True  # exact fast path
        try:
            fatten(h, Q(1, schedule.indices[0]))
        except MeanlabError:
            return False
        return True

    return MeanRef("lavg", ev, dom, exact=False, param=schedule)


def m_iso_ref(schedule: LimitSchedule = DEFAULT_SCHEDULE) -> MeanRef:
    """Limit of the isolated-point means as a catalogue entry."""
    def ev(h: RealSet) -> Approx:
        return m_iso(h, schedule)

    def dom(h: RealSet) -> bool:
        try:
            iso_n(h, schedule.indices[0])
        except MeanlabError:
            return False
        return True

    return MeanRef("m_iso", ev, dom, exact=False, param=schedule)


def m_eds_ref(schedule: LimitSchedule = DEFAULT_SCHEDULE) -> MeanRef:
    """Limit of the equal-division means as a catalogue entry."""
    def ev(h: RealSet) -> Approx:
        return m_eds(h, schedule)

    def dom(h: RealSet) -> bool:
        try:
            eds_n(h, schedule.indices[0])
        except MeanlabError:
            return False
        return True

    return MeanRef("m_eds", ev, dom, exact=False, param=schedule)


def avg_f_ref(f: MonotoneFunc) -> MeanRef:
    """Quasi-arithmetic average as a catalogue entry."""
    def ev(h: RealSet) -> Value:
        return avg_f(f, h)

    return MeanRef(f"avg_f:{f.name()}", ev, _domain_by_trial(ev),
                   exact=f.exact, param=f)


def transform_kf(k: MeanRef, f: MonotoneFunc) -> MeanRef:
    """Conjugate a catalogue mean by a monotone transform.

    The returned mean evaluates the base mean on the image of the set and
    pulls the value back through the inverse. Exact transforms work with
    every catalogue mean and keep the base mean's exactness; certified
    transforms (exponential/logarithmic) are supported for the finite
    arithmetic mean and the plain length average via enclosure arithmetic.
    """
    def evaluate(h: RealSet) -> Value:
        if f.exact:
            return invert_value(f, k.evaluate(image_set(h, f)))
        if k.id == "amean":
            if h.is_empty:
                raise EmptySet("arithmetic mean of the empty set is undefined")
            if not h.is_finite():
                raise NotFinite("arithmetic mean needs a finite point set")
            lo_sum = Q(0)
            hi_sum = Q(0)
            for p in h.points:
                b_lo, b_hi = f.apply_bounds(p)
                lo_sum += b_lo
                hi_sum += b_hi
            n = len(h.points)
            return invert_value(f, Approx((lo_sum + hi_sum) / (2 * n),
                                          (hi_sum - lo_sum) / (2 * n)))
        if k.id == "avg1":
            if h.is_empty:
                raise EmptySet("average of the empty set is undefined")
            # the image of each interval is an interval; bound its length
            # and first moment through certified endpoint enclosures
            mom_lo = Q(0)
            mom_hi = Q(0)
            len_lo = Q(0)
            len_hi = Q(0)
            for iv_ in h.intervals:
                a_lo, a_hi = f.apply_bounds(iv_.lo)
                b_lo, b_hi = f.apply_bounds(iv_.hi)
                if not f.increasing:
                    a_lo, a_hi, b_lo, b_hi = b_lo, b_hi, a_lo, a_hi
                # image interval [A, B] with A in [a_lo,a_hi], B in [b_lo,b_hi]
                len_lo += max(Q(0), b_lo - a_hi)
                len_hi += b_hi - a_lo
                m_cands = [(b * b - a * a) / 2
                           for a in (a_lo, a_hi) for b in (b_lo, b_hi)]
                mom_lo += min(m_cands)
                mom_hi += max(m_cands)
            if len_lo <= 0:
                raise NullSet("the image carries no certified length")
            cands = [m / l for m in (mom_lo, mom_hi) for l in (len_lo, len_hi)]
            v_lo, v_hi = min(cands), max(cands)
            return invert_value(f, Approx((v_lo + v_hi) / 2, (v_hi - v_lo) / 2))
        raise UnsupportedMean(
            "certified transforms support only the finite arithmetic mean "
            "and the plain length average")

    return MeanRef(f"{k.id}^{f.name()}", evaluate, _domain_by_trial(evaluate),
                   exact=k.exact and f.exact, param=(k, f))


# --------------------------------------------------------------------------
# name resolution for the CLI and the property harness


MEAN_NAMES = ("amean", "avg1", "m_acc", "iso", "eds", "avg_fat", "lavg",
              "m_iso", "m_eds", "m_mu", "avg_f")

_ALIASES = {"macc": "m_acc", "miso": "m_iso", "meds": "m_eds",
            "mmu": "m_mu", "avgfat": "avg_fat", "avgf": "avg_f"}


def resolve_mean(name: str, *, n: int | None = None, delta=None,
                 density: DensityMeasure | None = None,
                 func: MonotoneFunc | None = None,
                 schedule: LimitSchedule | None = None) -> MeanRef:
    """Build the MeanRef named by ``name``.

    Stage/radius parameters come from the keyword arguments or from an
    embedded ``name:param`` tag (``iso:4``, ``avg_fat:1/4``). A ``func``
    passed alongside a base mean conjugates it; ``avg_f`` consumes the
    function as its own defining parameter instead.
    """
    key = name.strip().lower().replace("-", "_")
    if ":" in key:
        key, _, tag = key.partition(":")
        key = _ALIASES.get(key, key)
        if key in ("iso", "eds"):
            n = int(tag)
        elif key == "avg_fat":
            delta = Q(tag)
        else:
            raise BadParameters(f"{key} does not take an embedded parameter")
    key = _ALIASES.get(key, key)
    sched = schedule if schedule is not None else DEFAULT_SCHEDULE

    conjugate = func if key != "avg_f" else None
    if key == "amean":
        ref = AMEAN
    elif key == "avg1":
        ref = AVG1
    elif key == "m_acc":
        ref = M_ACC
    elif key == "iso":
        if n is None:
            raise BadParameters("the iso mean needs a stage n")
        ref = iso_ref(n)
    elif key == "eds":
        if n is None:
            raise BadParameters("the eds mean needs a division count n")
        ref = eds_ref(n)
    elif key == "avg_fat":
        if delta is None:
            raise BadParameters("the neighborhood average needs a radius")
        ref = avg_fat_ref(delta)
    elif key == "lavg":
        ref = lavg_ref(sched)
    elif key == "m_iso":
        ref = m_iso_ref(sched)
    elif key == "m_eds":
        ref = m_eds_ref(sched)
    elif key == "m_mu":
        if density is None:
            raise BadParameters("the density average needs a density measure")
        ref = m_mu_ref(density)
    elif key == "avg_f":
        if func is None:
            raise BadParameters("the quasi-arithmetic average needs a "
                                "transform function")
        ref = avg_f_ref(func)
    else:
        raise BadParameters(f"unknown mean name: {name!r}")
    if conjugate is not None:
        ref = transform_kf(ref, conjugate)
    return ref
