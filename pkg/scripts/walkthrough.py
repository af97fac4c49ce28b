#!/usr/bin/env python3
"""End-to-end tour of the library: sets, means, analysis, property audits.

Run from the repository root after installing the package:

    python3 scripts/walkthrough.py
"""

from fractions import Fraction as Q

from meanlab.analysis import (
    acc_points_by_mean,
    d_mean,
    d_probe,
    liminf_by_mean,
    limsup_by_mean,
)
from meanlab.axioms import check
from meanlab.cli import value_text
from meanlab.exactset import from_interval, from_points, set_union
from meanlab.funcs import SQUARE
from meanlab.limits import DEFAULT_SCHEDULE
from meanlab.means import resolve_mean, transform_kf
from meanlab.measure import DensityMeasure
from meanlab.setexpr import evaluate, parse, print_expr, set_to_expr


def section(title):
    print(f"\n== {title} ==")


def main():
    section("sets from expressions")
    h = evaluate(parse("{0} u [2,3] u seq(limit=2, rule=harmonic(1), from=4, side=below)"))
    print("parsed set:", print_expr(set_to_expr(h)))
    print("member 2 - 1/5:", h.member(Q(2) - Q(1, 5)))
    print("member 1/2:", h.member(Q(1, 2)))

    section("the mean catalogue on one set")
    for name in ("avg1", "amean", "m_acc", "eds:3", "avg_fat:1/4", "lavg"):
        k = resolve_mean(name)
        try:
            print(f"{k.id:12s} ->", value_text(k.evaluate(h)))
        except Exception as exc:  # domain mismatches are part of the story
            print(f"{k.id:12s} -> {type(exc).__name__}: {exc}")

    section("weighted and transformed means")
    mu = DensityMeasure.from_parts([(0, 1, 2), (1, 3, 1)])
    k_mu = resolve_mean("m_mu", density=mu)
    box = from_interval(Q(0), Q(2))
    print("density-weighted on [0,2]:", value_text(k_mu.evaluate(box)))
    conjugated = transform_kf(resolve_mean("avg1"), SQUARE)
    print("square-conjugated length average on [0,1]:",
          value_text(conjugated.evaluate(from_interval(Q(0), Q(1)))))

    section("analysis: bounds, derivatives, relevant accumulation points")
    avg1 = resolve_mean("avg1")
    satellites = set_union(from_interval(Q(2), Q(3)), from_points(Q(0), Q(9)))
    print("mean-liminf:", value_text(liminf_by_mean(avg1, satellites)))
    print("mean-limsup:", value_text(limsup_by_mean(avg1, satellites)))
    lower, upper, hint = d_mean(avg1, from_interval(Q(0), Q(1)), Q(0),
                                DEFAULT_SCHEDULE)
    print("one-sided derivative at the left edge:", value_text(lower),
          "occupancy hint", hint)
    probe, exact = d_probe(avg1, set_union(from_interval(Q(0), Q(1)),
                                           from_interval(Q(7), Q(8))),
                           "sup_append", DEFAULT_SCHEDULE)
    print("sup-append probe on [0,1] u [7,8]:", value_text(probe))
    acc = acc_points_by_mean(avg1, evaluate(parse("[0,1) u {5}")))
    print("relevant accumulation points of [0,1) u {5}:",
          print_expr(set_to_expr(acc)))

    section("property audits")
    for pid, mean_name in (("u_bounded", "avg1"),
                           ("monotone", "iso:4"),
                           ("closed", "eds:3")):
        report = check(pid, resolve_mean(mean_name), trials=20, seed=1)
        print(f"{pid} on {mean_name}: {report.verdict}")
        if report.witness is not None:
            for label, value in report.witness.values:
                print(f"    {label} = {value_text(value)}")


if __name__ == "__main__":
    main()
