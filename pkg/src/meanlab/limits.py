"""Numeric limit estimation over exact rational sample sequences.

A LimitSchedule fixes the sample indices and the stabilization policy.
Samples are exact Fractions; acceleration (Aitken delta-squared) runs in
exact rational arithmetic, and only the convergence verdict is a judgment:
the estimate stabilizes when several consecutive accelerated values agree
within the tolerance. The result is an Approx carrying the declared radius;
it is a stabilization certificate, not a proof of convergence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import BadConfig, NoConvergence
from .values import Approx

Q = Fraction


def _default_indices() -> tuple[int, ...]:
    return tuple(2 ** j for j in range(4, 21))


@dataclass(frozen=True)
class LimitSchedule:
    """Sample indices plus the stabilization policy for limit estimates."""

    indices: tuple[int, ...] = field(default_factory=_default_indices)
    tolerance: Fraction = Q(1, 10 ** 9)
    agreements: int = 3

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(n) for n in self.indices))
        object.__setattr__(self, "tolerance", Q(self.tolerance))
        if len(self.indices) < 3:
            raise BadConfig("a limit schedule needs at least three samples")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise BadConfig("schedule indices must be strictly increasing")
        if self.tolerance <= 0:
            raise BadConfig("tolerance must be positive")
        if self.agreements < 1:
            raise BadConfig("agreement count must be >= 1")


DEFAULT_SCHEDULE = LimitSchedule()


def aitken_accelerate(samples: Sequence[Fraction]) -> list[Fraction]:
    """Exact delta-squared acceleration; falls back to the raw value when
    the second difference vanishes."""
    out: list[Fraction] = []
    for i in range(len(samples) - 2):
        a0, a1, a2 = samples[i], samples[i + 1], samples[i + 2]
        denom = a2 - 2 * a1 + a0
        if denom == 0:
            out.append(a2)
        else:
            out.append(a2 - (a2 - a1) ** 2 / denom)
    return out


def limit_estimate(sampler: Callable[[int], Fraction],
                   schedule: LimitSchedule = DEFAULT_SCHEDULE,
                   label: str = "limit") -> Approx:
    """Estimate lim sampler(n) along the schedule.

    Stabilizes when `agreements` consecutive accelerated values agree within
    the tolerance; raises NoConvergence with the sampled trace otherwise.
    """
    samples: list[Fraction] = []
    accel: list[Fraction] = []
    streak = 0
    for n in schedule.indices:
        samples.append(Q(sampler(n)))
        if len(samples) >= 3:
            a0, a1, a2 = samples[-3], samples[-2], samples[-1]
            denom = a2 - 2 * a1 + a0
            acc = a2 if denom == 0 else a2 - (a2 - a1) ** 2 / denom
            if accel and abs(acc - accel[-1]) <= schedule.tolerance:
                streak += 1
            else:
                streak = 0
            accel.append(acc)
            if streak + 1 >= schedule.agreements:
                return Approx(acc, 2 * schedule.tolerance)
    trace = [(n, float(v)) for n, v in zip(schedule.indices, samples)]
    raise NoConvergence(
        f"{label} did not stabilize within the schedule", trace=trace)
