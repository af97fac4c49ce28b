"""Command-line interface.

Commands
--------
eval       evaluate a mean on a set (exact rational plus rounded decimal)
limit      run a limit-type mean with a schedule; emits the trace as CSV
derive     one-sided derivative data (--at x) or endpoint probes (--side)
accpoints  the set of points whose removal matters to the mean
bounds     mean-liminf and mean-limsup of a set
props      run property checkers against a mean
report     aggregate property reports as JSON or CSV

Sets are written in the expression language of :mod:`meanlab.setexpr`;
``--set -`` reads the expression from stdin. All outputs are deterministic
given flags and seed. Engine errors exit nonzero with a machine-readable
JSON payload on stderr (exit 2 for parse/usage errors, 1 otherwise).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from .analysis import (
    acc_points_by_mean,
    d_mean,
    d_probe,
    liminf_by_mean,
    limsup_by_mean,
)
from .axioms import GeneratorConfig, PropertyReport, PROPERTY_IDS, check
from .errors import BadParameters, MeanlabError, NoConvergence, ParseError
from .exactset import RealSet
from .funcs import parse_func
from .limits import DEFAULT_SCHEDULE, LimitSchedule, limit_estimate
from .means import MeanRef, avg_fat, eds_n, iso_n, resolve_mean
from .measure import DensityMeasure
from .setexpr import (
    evaluate,
    format_rational,
    parse,
    parse_rational_text,
    print_expr,
    set_to_expr,
)
from .values import Approx, RootValue, decimal_str, value_bounds, value_mid

Q = Fraction


# --------------------------------------------------------------------------
# rendering


def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _trim(dec: str) -> str:
    if "." in dec:
        dec = dec.rstrip("0").rstrip(".")
    return dec or "0"


def value_json(v) -> dict:
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator,
                "decimal": decimal_str(v)}
    if isinstance(v, RootValue):
        lo, hi = value_bounds(v)
        return {"root": {"radicand": _frac_json(v.radicand),
                         "degree": v.degree},
                "decimal": decimal_str(value_mid(v)),
                "enclosure_radius": _frac_json((hi - lo) / 2)}
    if isinstance(v, Approx):
        return {"estimate": _frac_json(v.value), "error": _frac_json(v.error),
                "decimal": decimal_str(v.value)}
    raise BadParameters(f"not a value: {v!r}")


def value_text(v) -> str:
    if isinstance(v, Fraction):
        return (f"{_trim(decimal_str(v))} "
                f"(exact {v.numerator}/{v.denominator})")
    if isinstance(v, RootValue):
        return (f"{_trim(decimal_str(value_mid(v)))} "
                f"(exact {format_rational(v.radicand)}^(1/{v.degree}))")
    if isinstance(v, Approx):
        return f"{_trim(decimal_str(v.value))} ± {float(v.error):.3g}"
    raise BadParameters(f"not a value: {v!r}")


def _set_text(h: RealSet) -> str:
    if h.is_empty:
        return "(empty set)"
    try:
        return print_expr(set_to_expr(h))
    except MeanlabError:
        return repr(h)


def _emit_error(exc: MeanlabError, extra: Optional[dict] = None) -> None:
    payload = exc.payload()
    if extra:
        payload.update(extra)
    sys.stderr.write(json.dumps({"error": payload}) + "\n")


# --------------------------------------------------------------------------
# flag plumbing


def _read_set(text: str) -> RealSet:
    if text == "-":
        text = sys.stdin.read()
    return evaluate(parse(text))


def _parse_density(text: str) -> DensityMeasure:
    parts = []
    for piece in text.split(";"):
        fields = piece.split(",")
        if len(fields) != 3:
            raise BadParameters(
                "density pieces are 'lo,hi,weight' separated by ';'")
        parts.append(tuple(parse_rational_text(f) for f in fields))
    return DensityMeasure.from_parts(tuple(parts))


def _build_schedule(args) -> LimitSchedule:
    tol = parse_rational_text(args.tol) if args.tol else Q(1, 10 ** 9)
    max_n = args.max_n if args.max_n else 2 ** 20
    if max_n < 16:
        raise BadParameters("--max-n must be at least 16")
    indices = []
    n = 16
    while n <= max_n:
        indices.append(n)
        n *= 2
    return LimitSchedule(indices=tuple(indices), tolerance=tol)


def _build_mean(args, schedule: LimitSchedule) -> MeanRef:
    func = parse_func(args.f) if getattr(args, "f", None) else None
    density = _parse_density(args.density) if getattr(args, "density", None) \
        else None
    delta = parse_rational_text(args.delta) if getattr(args, "delta", None) \
        else None
    return resolve_mean(args.mean, n=getattr(args, "n", None), delta=delta,
                        density=density, func=func, schedule=schedule)


def _add_mean_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mean", required=True,
                   help="mean name (amean, avg1, m_acc, iso, eds, avg_fat, "
                        "lavg, m_iso, m_eds, m_mu, avg_f); 'name:tag' "
                        "embeds a parameter, e.g. eds:3")
    p.add_argument("--f", help="monotone transform, e.g. square, exp(2), "
                               "affine(2,1); conjugates the mean (for "
                               "avg_f it is the defining transform)")
    p.add_argument("--n", type=int, help="stage for iso/eds")
    p.add_argument("--delta", help="radius for avg_fat (rational)")
    p.add_argument("--density",
                   help="density pieces 'lo,hi,weight[;lo,hi,weight...]' "
                        "for m_mu")
    p.add_argument("--tol", help="limit tolerance (rational or scientific)")
    p.add_argument("--max-n", type=int, dest="max_n",
                   help="largest schedule index (default 2^20)")


def _add_common(p: argparse.ArgumentParser, *, set_required=True) -> None:
    _add_mean_flags(p)
    p.add_argument("--set", required=set_required,
                   help="set expression ('-' reads stdin)")
    p.add_argument("--json", action="store_true", help="emit JSON")


# --------------------------------------------------------------------------
# commands


def _cmd_eval(args) -> int:
    schedule = _build_schedule(args)
    k = _build_mean(args, schedule)
    h = _read_set(args.set)
    sets = {"H": h}
    if args.set2:
        from .exactset import set_union

        h2 = _read_set(args.set2)
        sets = {"H1": h, "H2": h2, "H1 u H2": set_union(h, h2)}
    results = {label: k.evaluate(s) for label, s in sets.items()}
    if args.json:
        print(json.dumps({"command": "eval", "mean": k.id,
                          "values": {lb: value_json(v)
                                     for lb, v in results.items()}}))
    elif len(results) == 1:
        print(value_text(next(iter(results.values()))))
    else:
        for lb, v in results.items():
            print(f"{lb}: {value_text(v)}")
    return 0


_STAGE_SAMPLERS = {
    "lavg": lambda h, n: avg_fat(h, Q(1, n)),
    "m_iso": lambda h, n: iso_n(h, n),
    "m_eds": lambda h, n: eds_n(h, n),
}


def _cmd_limit(args) -> int:
    schedule = _build_schedule(args)
    k = _build_mean(args, schedule)
    kind = k.kind()
    if kind not in _STAGE_SAMPLERS:
        raise BadParameters(
            "limit needs a limit-type mean: lavg, m_iso, or m_eds")
    h = _read_set(args.set)
    stage = _STAGE_SAMPLERS[kind]
    rows: list[tuple[int, Fraction]] = []

    def recorder(n: int) -> Fraction:
        v = stage(h, n)
        rows.append((n, v))
        return v

    exact_value = None
    if kind == "lavg" and h.intervals:
        exact_value = k.evaluate(h)
    try:
        est = limit_estimate(recorder, schedule, label=f"{k.id} limit")
    except NoConvergence as exc:
        if exact_value is None:
            raise NoConvergence(str(exc),
                                trace=[(n, float(v)) for n, v in rows])
        est = Approx(exact_value, schedule.tolerance)
    if exact_value is not None:
        est = Approx(exact_value, min(est.error, schedule.tolerance))
    if args.json:
        print(json.dumps({
            "command": "limit", "mean": k.id,
            "estimate": _frac_json(est.value),
            "error": _frac_json(est.error),
            "decimal": decimal_str(est.value),
            "trace": [{"n": n, "value": _frac_json(v)} for n, v in rows],
        }))
    else:
        print(f"estimate {_trim(decimal_str(est.value))} "
              f"± {float(est.error):.3g}")
        print("n,value")
        for n, v in rows:
            print(f"{n},{decimal_str(v)}")
    return 0


def _cmd_derive(args) -> int:
    schedule = _build_schedule(args)
    k = _build_mean(args, schedule)
    h = _read_set(args.set)
    if (args.at is None) == (args.side is None):
        raise BadParameters("derive needs exactly one of --at or --side")
    if args.at is not None:
        x = parse_rational_text(args.at)
        val, spread, hint = d_mean(k, h, x, schedule)
        if args.json:
            out = {"command": "derive", "mean": k.id, "at": _frac_json(x),
                   "value": value_json(val), "spread": value_json(spread)}
            if hint is not None:
                out["occupancy_hint"] = _frac_json(hint)
            print(json.dumps(out))
        else:
            line = f"derivative {value_text(val)}; spread {value_text(spread)}"
            if hint is not None:
                line += f"; occupancy hint {format_rational(hint)}"
            print(line)
    else:
        val, exact_slope = d_probe(k, h, args.side, schedule)
        if args.json:
            out = {"command": "derive", "mean": k.id, "side": args.side,
                   "value": value_json(val)}
            if exact_slope is not None:
                out["exact"] = _frac_json(exact_slope)
            print(json.dumps(out))
        else:
            tag = " (exact)" if exact_slope is not None else ""
            print(f"probe {value_text(val)}{tag}")
    return 0


def _cmd_accpoints(args) -> int:
    schedule = _build_schedule(args)
    k = _build_mean(args, schedule)
    h = _read_set(args.set)
    acc = acc_points_by_mean(k, h)
    if args.json:
        print(json.dumps({"command": "accpoints", "mean": k.id,
                          "empty": acc.is_empty,
                          "set": None if acc.is_empty else _set_text(acc)}))
    else:
        print(_set_text(acc))
    return 0


def _cmd_bounds(args) -> int:
    schedule = _build_schedule(args)
    k = _build_mean(args, schedule)
    h = _read_set(args.set)
    li = liminf_by_mean(k, h)
    ls = limsup_by_mean(k, h)
    if args.json:
        print(json.dumps({"command": "bounds", "mean": k.id,
                          "liminf": value_json(li),
                          "limsup": value_json(ls)}))
    else:
        print(f"liminf {value_text(li)}")
        print(f"limsup {value_text(ls)}")
    return 0


def _report_json(r: PropertyReport) -> dict:
    out = {"property": r.property_id, "mean": r.mean_id,
           "verdict": r.verdict, "trials": r.trials, "seed": r.seed,
           "reconstructed": r.reconstructed}
    if r.witness is not None:
        out["witness"] = {
            "note": r.witness.note,
            "sets": [_set_text(s) for s in r.witness.sets],
            "values": [{"label": lb, "value": value_json(v)}
                       for lb, v in r.witness.values],
        }
    return out


def _print_report(r: PropertyReport) -> None:
    recon = ", reconstructed" if r.reconstructed else ""
    print(f"{r.property_id} on {r.mean_id}: {r.verdict} "
          f"(trials={r.trials}, seed={r.seed}{recon})")
    if r.witness is not None:
        if r.witness.note:
            print(f"  note: {r.witness.note}")
        for lb, v in r.witness.values:
            print(f"  {lb} = {value_text(v)}")
        for i, s in enumerate(r.witness.sets, 1):
            print(f"  set {i}: {_set_text(s)}")


def _suite_ids(suite: Optional[str]) -> tuple[str, ...]:
    if not suite:
        return PROPERTY_IDS
    ids = []
    for token in suite.split(","):
        pid = token.strip().lower().replace("-", "_")
        if pid not in PROPERTY_IDS:
            raise BadParameters(f"unknown property: {token.strip()!r}")
        ids.append(pid)
    return tuple(ids)


def _run_reports(args) -> list[PropertyReport]:
    schedule = _build_schedule(args)
    k = _build_mean(args, schedule)
    cfg = GeneratorConfig(schedule=schedule)
    return [check(pid, k, cfg, trials=args.trials, seed=args.seed)
            for pid in _suite_ids(args.suite)]


def _cmd_props(args) -> int:
    reports = _run_reports(args)
    if args.json:
        print(json.dumps({"command": "props",
                          "reports": [_report_json(r) for r in reports]}))
    else:
        for r in reports:
            _print_report(r)
    return 0


def _cmd_report(args) -> int:
    reports = _run_reports(args)
    if args.csv:
        print("property,mean,verdict,trials,seed,reconstructed")
        for r in reports:
            print(f"{r.property_id},{r.mean_id},{r.verdict},{r.trials},"
                  f"{r.seed},{str(r.reconstructed).lower()}")
    else:
        print(json.dumps({"command": "report",
                          "reports": [_report_json(r) for r in reports]}))
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="meanlab",
        description="Exact generalized means of finitely representable "
                    "real sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a mean on a set")
    _add_common(p)
    p.add_argument("--set2", help="second set; reports both parts and "
                                  "their union")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("limit", help="limit-type mean with schedule trace")
    _add_common(p)
    p.set_defaults(fn=_cmd_limit)

    p = sub.add_parser("derive", help="derivative data at a point or "
                                      "endpoint probes")
    _add_common(p)
    p.add_argument("--at", help="inner point x for the pointwise derivative")
    p.add_argument("--side", choices=("sup_append", "inf_append"),
                   help="endpoint probe direction")
    p.set_defaults(fn=_cmd_derive)

    p = sub.add_parser("accpoints", help="mean-relevant accumulation points")
    _add_common(p)
    p.set_defaults(fn=_cmd_accpoints)

    p = sub.add_parser("bounds", help="mean-liminf and mean-limsup")
    _add_common(p)
    p.set_defaults(fn=_cmd_bounds)

    for name, help_text in (("props", "run property checkers"),
                            ("report", "aggregate property reports")):
        p = sub.add_parser(name, help=help_text)
        _add_mean_flags(p)
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--suite",
                       help="comma-separated property ids (default: all)")
        p.add_argument("--trials", type=int, default=60)
        p.add_argument("--seed", type=int, default=0)
        if name == "report":
            p.add_argument("--csv", action="store_true",
                           help="emit CSV instead of JSON")
        p.set_defaults(fn=_cmd_props if name == "props" else _cmd_report)

    return ap


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        _emit_error(exc)
        return 2
    except NoConvergence as exc:
        _emit_error(exc, {"trace": [[n, v] for n, v in exc.trace]})
        return 1
    except MeanlabError as exc:
        _emit_error(exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
