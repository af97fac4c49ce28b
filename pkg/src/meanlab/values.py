"""Value carriers for mean evaluations.

A mean evaluation returns one of three shapes:

* ``Fraction`` when the result is an exact rational,
* ``RootValue`` when the result is an exact n-th root of a rational
  (inverse images under power maps),
* ``Approx`` when the result is a limit estimate or a certified enclosure
  midpoint, always paired with an explicit error bound.

Comparison helpers below work uniformly across the three shapes so the
property checkers never need to branch on type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Approx:
    """A rational estimate with a reported bound on |true - value|."""

    value: Fraction
    error: Fraction

    def bounds(self) -> tuple[Fraction, Fraction]:
        return (self.value - self.error, self.value + self.error)

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class RootValue:
    """Exact degree-th root of a rational radicand.

    Even degrees require a nonnegative radicand; odd degrees carry the
    radicand's sign through. Degree 1 is a plain rational in disguise.
    """

    radicand: Fraction
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("root degree must be >= 1")
        if self.degree % 2 == 0 and self.radicand < 0:
            raise ValueError("even root of a negative radicand")

    def power(self) -> Fraction:
        """The exact degree-th power of this value (its radicand)."""
        return self.radicand

    def as_fraction(self) -> Fraction | None:
        """Exact rational value when the radicand is a perfect power."""
        if self.degree == 1:
            return self.radicand
        num = _iroot_exact(abs(self.radicand.numerator), self.degree)
        den = _iroot_exact(self.radicand.denominator, self.degree)
        if num is None or den is None:
            return None
        root = Fraction(num, den)
        return -root if self.radicand < 0 else root

    def compare(self, other: "Fraction | RootValue") -> int:
        """Exact three-way comparison; -1, 0, +1."""
        if isinstance(other, RootValue):
            # r1^(1/n) vs r2^(1/m): compare r1^m vs r2^n on matching signs.
            s1, s2 = _sign(self.radicand), _sign(other.radicand)
            if s1 != s2:
                return -1 if s1 < s2 else 1
            a = self.radicand ** other.degree
            b = other.radicand ** self.degree
            if self.degree % 2 == 0 or other.degree % 2 == 0:
                # all quantities nonnegative on the even side
                a, b = abs(a), abs(b)
                if s1 < 0:
                    a, b = b, a
            return (a > b) - (a < b)
        s1, s2 = _sign(self.radicand), _sign(other)
        if s1 != s2:
            return -1 if s1 < s2 else 1
        powered = other ** self.degree
        if s1 < 0 and self.degree % 2 == 0:  # unreachable: even roots nonneg
            powered = abs(powered)
        return (self.radicand > powered) - (self.radicand < powered)

    def enclosure(self, scale_bits: int = 80) -> tuple[Fraction, Fraction]:
        """Exact rational bracket of width <= 2**-scale_bits."""
        exact = self.as_fraction()
        if exact is not None:
            return (exact, exact)
        neg = self.radicand < 0
        r = abs(self.radicand)
        lo, hi = Fraction(0), max(Fraction(1), r)
        tol = Fraction(1, 2 ** scale_bits)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if mid ** self.degree <= r:
                lo = mid
            else:
                hi = mid
        return (-hi, -lo) if neg else (lo, hi)

    def __float__(self) -> float:
        lo, hi = self.enclosure(60)
        return float((lo + hi) / 2)

    def __lt__(self, other):
        return self.compare(_coerce(other)) < 0

    def __le__(self, other):
        return self.compare(_coerce(other)) <= 0

    def __gt__(self, other):
        return self.compare(_coerce(other)) > 0

    def __ge__(self, other):
        return self.compare(_coerce(other)) >= 0


MeanValue = "Fraction | RootValue | Approx"


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _coerce(x):
    if isinstance(x, (RootValue, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot compare RootValue with {type(x).__name__}")


def _iroot_exact(n: int, k: int) -> int | None:
    """Integer k-th root of n when exact, else None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    # float seed can be off for huge n; fall back to bit-length bisection
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid ** k
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def value_bounds(v) -> tuple[Fraction, Fraction]:
    """Exact rational lower/upper bounds for any value shape."""
    if isinstance(v, Fraction):
        return (v, v)
    if isinstance(v, int):
        return (Fraction(v), Fraction(v))
    if isinstance(v, Approx):
        return v.bounds()
    if isinstance(v, RootValue):
        return v.enclosure()
    raise TypeError(f"not a mean value: {type(v).__name__}")


def value_mid(v) -> Fraction:
    lo, hi = value_bounds(v)
    return (lo + hi) / 2


def values_close(a, b, tol: Fraction = Fraction(0)) -> bool:
    """True when the values could coincide within tol, honoring bounds."""
    alo, ahi = value_bounds(a)
    blo, bhi = value_bounds(b)
    return alo - tol <= bhi and blo - tol <= ahi


def value_le(a, b, tol: Fraction = Fraction(0)) -> bool:
    """True when a <= b is consistent with both values' bounds plus tol."""
    alo, _ = value_bounds(a)
    _, bhi = value_bounds(b)
    return alo <= bhi + tol


def value_lt_strict(a, b, tol: Fraction = Fraction(0)) -> bool:
    """True when a < b holds for every point of both bounds (minus tol)."""
    _, ahi = value_bounds(a)
    blo, _ = value_bounds(b)
    return ahi < blo + tol


def decimal_str(x: Fraction, places: int = 12) -> str:
    """Correctly rounded fixed-point rendering (ties to even)."""
    sign = "-" if x < 0 else ""
    n, d = abs(x.numerator), x.denominator
    scaled = n * 10 ** places
    q, rem = divmod(scaled, d)
    double = 2 * rem
    if double > d or (double == d and q % 2 == 1):
        q += 1
    whole, frac = divmod(q, 10 ** places)
    return f"{sign}{whole}.{str(frac).zfill(places)}"
