"""Strictly monotone transform functions applied to real sets.

Exact kinds (affine, odd powers, square on the nonnegative half-line, and
compositions of those) evaluate rationals to rationals and invert to exact
shapes (Fraction or RootValue). Exponential and logarithm kinds evaluate to
certified rational enclosures built from directed-rounding interval
arithmetic; the enclosure width budget is 2**-80 unless a caller asks for
more.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .errors import BadParameters, DomainViolation
from .values import Approx, RootValue, value_bounds

FORWARD_BITS = 80


def _frac_to_iv(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _mpf_tuple_to_frac(t) -> Fraction:
    sign, man, exp, _ = t
    f = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -f if sign else f


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    a, b = x._mpi_
    return _mpf_tuple_to_frac(a), _mpf_tuple_to_frac(b)


def _certified(compute, bits: int) -> tuple[Fraction, Fraction]:
    """Run an iv computation at rising precision until width <= 2**-bits."""
    prec = bits + 40
    tol = Fraction(1, 2 ** bits)
    for _ in range(6):
        old = iv.prec
        iv.prec = prec
        try:
            lo, hi = _iv_bounds(compute())
        finally:
            iv.prec = old
        if hi - lo <= tol:
            return lo, hi
        prec *= 2
    raise BadParameters("enclosure failed to reach the requested width")


class MonotoneFunc:
    """Base: strictly monotone continuous function on a declared domain."""

    exact = False
    increasing = True

    def contains(self, x: Fraction) -> bool:
        return True

    def apply(self, x: Fraction) -> Fraction:
        raise DomainViolation(f"{self.name()} has no exact forward evaluation")

    def apply_bounds(self, x: Fraction, bits: int = FORWARD_BITS) -> tuple[Fraction, Fraction]:
        v = self.apply(x)
        return v, v

    def invert(self, v, bits: int = FORWARD_BITS):
        """Inverse image of a value shape; exact shape when possible."""
        raise NotImplementedError

    def name(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Affine(MonotoneFunc):
    """x -> slope*x + shift with nonzero slope."""

    slope: Fraction
    shift: Fraction

    def __post_init__(self):
        if self.slope == 0:
            raise BadParameters("affine transform needs a nonzero slope")

    exact = True

    @property
    def increasing(self) -> bool:
        return self.slope > 0

    def apply(self, x: Fraction) -> Fraction:
        return self.slope * x + self.shift

    def invert(self, v, bits: int = FORWARD_BITS):
        if isinstance(v, Fraction):
            return (v - self.shift) / self.slope
        if isinstance(v, RootValue):
            exact = v.as_fraction()
            if exact is not None:
                return (exact - self.shift) / self.slope
            if self.shift == 0:
                # (r^(1/n))/a = (r/a^n)^(1/n), sign handled for odd n
                if self.slope > 0 or v.degree % 2 == 1:
                    return RootValue(v.radicand / self.slope ** v.degree, v.degree)
        lo, hi = value_bounds(v)
        a, b = (v0 := (lo - self.shift) / self.slope), (hi - self.shift) / self.slope
        lo2, hi2 = min(v0, b), max(v0, b)
        return Approx((lo2 + hi2) / 2, (hi2 - lo2) / 2)

    def name(self) -> str:
        return f"affine({self.slope},{self.shift})"


@dataclass(frozen=True)
class OddPower(MonotoneFunc):
    """x -> x**n for odd n >= 1; increasing on all of the line."""

    n: int

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise BadParameters("power kind needs an odd positive exponent")

    exact = True
    increasing = True

    def apply(self, x: Fraction) -> Fraction:
        return x ** self.n

    def invert(self, v, bits: int = FORWARD_BITS):
        if isinstance(v, Fraction):
            r = RootValue(v, self.n)
            exact = r.as_fraction()
            return exact if exact is not None else r
        lo, hi = value_bounds(v)
        rlo, _ = RootValue(lo, self.n).enclosure(bits)
        _, rhi = RootValue(hi, self.n).enclosure(bits)
        return Approx((rlo + rhi) / 2, (rhi - rlo) / 2)

    def name(self) -> str:
        return f"pow({self.n})"


@dataclass(frozen=True)
class SquareOnNonneg(MonotoneFunc):
    """x -> x**2 restricted to x >= 0, where it is increasing."""

    exact = True
    increasing = True

    def contains(self, x: Fraction) -> bool:
        return x >= 0

    def apply(self, x: Fraction) -> Fraction:
        if x < 0:
            raise DomainViolation("square transform domain is x >= 0")
        return x * x

    def invert(self, v, bits: int = FORWARD_BITS):
        if isinstance(v, Fraction):
            if v < 0:
                raise DomainViolation("square images are nonnegative")
            r = RootValue(v, 2)
            exact = r.as_fraction()
            return exact if exact is not None else r
        lo, hi = value_bounds(v)
        if lo < 0:
            raise DomainViolation("square images are nonnegative")
        rlo, _ = RootValue(lo, 2).enclosure(bits)
        _, rhi = RootValue(hi, 2).enclosure(bits)
        return Approx((rlo + rhi) / 2, (rhi - rlo) / 2)

    def name(self) -> str:
        return "square"


@dataclass(frozen=True)
class ExpBase(MonotoneFunc):
    """x -> base**x for rational base > 0, base != 1."""

    base: Fraction

    def __post_init__(self):
        if self.base <= 0 or self.base == 1:
            raise BadParameters("exp kind needs base > 0, base != 1")

    exact = False

    @property
    def increasing(self) -> bool:
        return self.base > 1

    def apply_bounds(self, x: Fraction, bits: int = FORWARD_BITS) -> tuple[Fraction, Fraction]:
        b, e = self.base, x
        return _certified(lambda: iv.exp(_frac_to_iv(e) * iv.log(_frac_to_iv(b))), bits)

    def invert(self, v, bits: int = FORWARD_BITS):
        lo, hi = value_bounds(v)
        if lo <= 0:
            raise DomainViolation("exp images are positive")
        b = self.base
        llo, _ = _certified(lambda: iv.log(_frac_to_iv(lo)) / iv.log(_frac_to_iv(b)), bits)
        _, lhi = _certified(lambda: iv.log(_frac_to_iv(hi)) / iv.log(_frac_to_iv(b)), bits)
        if not self.increasing:
            llo, lhi = min(llo, lhi), max(llo, lhi)
        return Approx((llo + lhi) / 2, (lhi - llo) / 2)

    def name(self) -> str:
        return f"exp({self.base})"


@dataclass(frozen=True)
class LogBase(MonotoneFunc):
    """x -> log_base(x) on x > 0 for rational base > 0, base != 1."""

    base: Fraction

    def __post_init__(self):
        if self.base <= 0 or self.base == 1:
            raise BadParameters("log kind needs base > 0, base != 1")

    exact = False

    @property
    def increasing(self) -> bool:
        return self.base > 1

    def contains(self, x: Fraction) -> bool:
        return x > 0

    def apply_bounds(self, x: Fraction, bits: int = FORWARD_BITS) -> tuple[Fraction, Fraction]:
        if x <= 0:
            raise DomainViolation("log transform domain is x > 0")
        b = self.base
        lo, hi = _certified(lambda: iv.log(_frac_to_iv(x)) / iv.log(_frac_to_iv(b)), bits)
        return (lo, hi) if lo <= hi else (hi, lo)

    def invert(self, v, bits: int = FORWARD_BITS):
        lo, hi = value_bounds(v)
        b = self.base
        plo, _ = _certified(lambda: iv.exp(_frac_to_iv(lo) * iv.log(_frac_to_iv(b))), bits)
        _, phi = _certified(lambda: iv.exp(_frac_to_iv(hi) * iv.log(_frac_to_iv(b))), bits)
        if not self.increasing:
            plo, phi = min(plo, phi), max(plo, phi)
        return Approx((plo + phi) / 2, (phi - plo) / 2)

    def name(self) -> str:
        return f"log({self.base})"


@dataclass(frozen=True)
class Compose(MonotoneFunc):
    """outer(inner(x)); strictly monotone as a composition."""

    outer: MonotoneFunc
    inner: MonotoneFunc

    @property
    def exact(self) -> bool:
        return self.outer.exact and self.inner.exact

    @property
    def increasing(self) -> bool:
        return self.outer.increasing == self.inner.increasing

    def contains(self, x: Fraction) -> bool:
        if not self.inner.contains(x):
            return False
        if not self.inner.exact:
            lo, hi = self.inner.apply_bounds(x)
            return self.outer.contains(lo) and self.outer.contains(hi)
        return self.outer.contains(self.inner.apply(x))

    def apply(self, x: Fraction) -> Fraction:
        return self.outer.apply(self.inner.apply(x))

    def apply_bounds(self, x: Fraction, bits: int = FORWARD_BITS) -> tuple[Fraction, Fraction]:
        ilo, ihi = self.inner.apply_bounds(x, bits + 10)
        olo = self.outer.apply_bounds(ilo, bits + 10)
        ohi = self.outer.apply_bounds(ihi, bits + 10)
        lo, hi = min(olo[0], ohi[0]), max(olo[1], ohi[1])
        if not self.outer.increasing:
            pass  # min/max already order-agnostic
        return lo, hi

    def invert(self, v, bits: int = FORWARD_BITS):
        mid = self.outer.invert(v, bits + 10)
        if isinstance(mid, (Fraction, RootValue)):
            return self.inner.invert(mid, bits)
        lo, hi = value_bounds(mid)
        a = self.inner.invert(lo, bits + 10)
        b = self.inner.invert(hi, bits + 10)
        alo, ahi = value_bounds(a)
        blo, bhi = value_bounds(b)
        lo2, hi2 = min(alo, blo), max(ahi, bhi)
        return Approx((lo2 + hi2) / 2, (hi2 - lo2) / 2)

    def name(self) -> str:
        return f"compose({self.outer.name()},{self.inner.name()})"


SQUARE = SquareOnNonneg()


def parse_func(text: str) -> MonotoneFunc:
    """Parse a transform spec like ``square``, ``pow(3)``, ``affine(2,1)``,
    ``exp(2)``, ``log(10)``, or ``compose(square,affine(1,3))``."""
    from .setexpr import parse_rational_text  # local import avoids a cycle

    text = text.strip()
    if text == "square":
        return SQUARE
    if text == "identity":
        return Affine(Fraction(1), Fraction(0))
    for head in ("pow", "affine", "exp", "log", "compose"):
        if text.startswith(head + "(") and text.endswith(")"):
            body = text[len(head) + 1:-1]
            if head == "compose":
                depth, cut = 0, -1
                for i, ch in enumerate(body):
                    if ch == "(":
                        depth += 1
                    elif ch == ")":
                        depth -= 1
                    elif ch == "," and depth == 0:
                        cut = i
                        break
                if cut < 0:
                    raise BadParameters("compose needs two arguments")
                return Compose(parse_func(body[:cut]), parse_func(body[cut + 1:]))
            args = [parse_rational_text(a) for a in body.split(",")]
            if head == "pow" and len(args) == 1:
                return OddPower(int(args[0]))
            if head == "affine" and len(args) == 2:
                return Affine(args[0], args[1])
            if head == "exp" and len(args) == 1:
                return ExpBase(args[0])
            if head == "log" and len(args) == 1:
                return LogBase(args[0])
            raise BadParameters(f"wrong arguments for {head}(...)")
    raise BadParameters(f"unknown transform function: {text!r}")
