"""Expression language: parsing, printing, evaluation, and serialization
of engine sets back into expressions."""

import random
from fractions import Fraction as Q

import pytest
from conftest import random_mixed_set

from meanlab.errors import BadParameters, ParseError, UnrepresentableResult
from meanlab.exactset import (
    from_interval,
    from_points,
    harmonic_cluster,
    realset,
    set_diff,
    set_intersect,
    set_union,
    slice_ge,
    translate,
)
from meanlab.funcs import SQUARE
from meanlab.means import image_set
from meanlab.measure import fatten
from meanlab.setexpr import (
    BinaryOp,
    CallOp,
    IntervalLit,
    PointsLit,
    SeqLit,
    evaluate,
    format_rational,
    parse,
    parse_rational_text,
    print_expr,
    set_to_expr,
)

CALL_NAMES = ("translate", "scale", "reflect", "fatten",
              "slice_le", "slice_ge")


# ------------------------------------------------------------------ parsing


def test_union_of_interval_literals():
    tree = parse("[0,1] u (2,3]")
    assert tree == BinaryOp("u",
                            IntervalLit(Q(0), Q(1), True, True),
                            IntervalLit(Q(2), Q(3), False, True))
    assert evaluate(tree) == set_union(
        from_interval(Q(0), Q(1)),
        from_interval(Q(2), Q(3), lo_closed=False))


def test_points_with_open_interval():
    h = evaluate(parse("{0,3} u (1,2)"))
    assert h == set_union(from_points(Q(0), Q(3)),
                          from_interval(Q(1), Q(2), False, False))


def test_sequence_literal():
    h = evaluate(parse("seq(limit=0, rule=harmonic(1), from=1)"))
    assert h.member(Q(1)) and h.member(Q(1, 5)) and h.member(Q(1, 100))
    assert not h.member(Q(0)) and not h.member(Q(2, 5))


def test_sequence_options_and_geometric_rule():
    below = evaluate(parse("seq(limit=2, rule=harmonic(3), from=1, "
                           "side=below, with_limit)"))
    assert below.member(Q(2)) and below.member(Q(2) - Q(3, 4))
    assert not below.member(Q(2) + Q(3, 4))
    geo = evaluate(parse("seq(limit=0, rule=geometric(1,1/2), from=1)"))
    assert geo.member(Q(1, 2)) and geo.member(Q(1, 8))
    assert not geo.member(Q(1, 3))


def test_transform_calls_match_engine_operations():
    base = set_union(from_interval(Q(0), Q(1)), from_points(Q(3)))
    assert evaluate(parse("translate([0,1] u {3}, 1/2)")) == \
        translate(base, Q(1, 2))
    assert evaluate(parse("fatten([0,1] u {3}, 1/4)")) == \
        fatten(base, Q(1, 4))
    assert evaluate(parse("slice_ge([0,1] u {3}, 1/2)")) == \
        slice_ge(base, Q(1, 2))
    assert evaluate(parse("reflect(scale({1,2}, 2), 0)")) == \
        from_points(Q(-4), Q(-2))


def test_operators_share_one_level_and_associate_left():
    tree = parse("[0,3] \\ (1,2) & {0}")
    assert tree.op == "&"
    assert tree.left.op == "\\"
    assert evaluate(tree) == from_points(Q(0))
    assert evaluate(parse("[0,2] & [1,3]")) == from_interval(Q(1), Q(2))
    assert parse("[0,1] ∪ {2}") == parse("[0,1] u {2}")


@pytest.mark.parametrize("text,line,col,expected_hint", [
    ("[0,1", 1, 5, "']'"),
    ("[0,1] u", 1, 8, "interval"),
    ("{,}", 1, 2, "rational"),
    ("seq(limit=0)", 1, 12, "','"),
    ("[1/0, 2]", 1, 4, "nonzero integer"),
    ("wibble(0,1)", 1, 1, "interval"),
    ("[0,1] ] ", 1, 7, "end of input"),
    ("", 1, 1, "interval"),
])
def test_parse_errors_carry_location_and_expectations(text, line, col,
                                                      expected_hint):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == line
    assert err.value.column == col
    assert expected_hint in err.value.expected
    assert f"line {line}, column {col}" in str(err.value)


def test_parse_error_tracks_lines():
    with pytest.raises(ParseError) as err:
        parse("[0,1] u\nwibble(")
    assert err.value.line == 2
    assert err.value.column == 1


def test_rational_text_forms():
    assert parse_rational_text("-7/2") == Q(-7, 2)
    assert parse_rational_text("0.25") == Q(1, 4)
    assert parse_rational_text("1e-3") == Q(1, 1000)
    assert format_rational(Q(-7, 2)) == "-7/2"
    assert format_rational(Q(4, 2)) == "2"
    with pytest.raises(BadParameters):
        parse_rational_text("wat")
    with pytest.raises(BadParameters):
        parse_rational_text("1/0")


# --------------------------------------------------------------- round trip


def _random_rational(rng):
    return Q(rng.randint(-24, 24), rng.randint(1, 12))


def _random_term(rng, depth=0):
    kind = rng.randrange(4 if depth < 2 else 3)
    if kind == 0:
        a, b = sorted((_random_rational(rng), _random_rational(rng)))
        if a == b:
            b = a + 1
        return IntervalLit(a, b, rng.random() < 0.5, rng.random() < 0.5)
    if kind == 1:
        pts = tuple({_random_rational(rng)
                     for _ in range(rng.randint(1, 4))})
        return PointsLit(pts)
    if kind == 2:
        name = rng.choice(("harmonic", "geometric"))
        c = abs(_random_rational(rng)) + Q(1, 7)
        q = Q(1, rng.randint(2, 5)) if name == "geometric" else None
        return SeqLit(_random_rational(rng), name, c, q,
                      rng.randint(1, 6), rng.random() < 0.3,
                      rng.random() < 0.3)
    return CallOp(rng.choice(CALL_NAMES), _random_term(rng, depth + 1),
                  _random_rational(rng))


def _random_expression(rng):
    # The grammar has no grouping, so trees are left-nested chains.
    expr = _random_term(rng)
    for _ in range(rng.randrange(3)):
        expr = BinaryOp(rng.choice(("u", "\\", "&")), expr,
                        _random_term(rng))
    return expr


def test_print_parse_round_trip_on_corpus():
    rng = random.Random(20260816)
    for _ in range(200):
        tree = _random_expression(rng)
        text = print_expr(tree)
        assert parse(text) == tree, text


def test_printed_text_is_canonical():
    assert print_expr(parse("  [ 0 , 1 ]u( 2 , 3]  ")) == "[0,1] u (2,3]"
    assert print_expr(parse("seq(limit = 1/2,rule=geometric(2,1/3),"
                            "from=4,side=below)")) == \
        "seq(limit=1/2, rule=geometric(2,1/3), from=4, side=below)"


# ------------------------------------------------------------ serialization


def test_set_to_expr_round_trips_random_sets():
    rng = random.Random(7)
    done = 0
    while done < 60:
        h = random_mixed_set(rng)
        if h.is_empty:
            continue
        assert evaluate(set_to_expr(h)) == h
        done += 1


def test_set_to_expr_round_trips_every_shape():
    h = set_union(
        set_union(from_interval(Q(0), Q(1), False, True),
                  from_points(Q(-3), Q(5))),
        realset(clusters=[harmonic_cluster(Q(2), c=Q(1), start=3,
                                           above=False,
                                           include_limit=True)]))
    assert evaluate(set_to_expr(h)) == h


def test_set_to_expr_rejects_sets_outside_the_grammar():
    with pytest.raises(UnrepresentableResult):
        set_to_expr(realset())
    mapped = image_set(
        realset(clusters=[harmonic_cluster(Q(0), c=Q(1), start=1)]), SQUARE)
    with pytest.raises(UnrepresentableResult):
        set_to_expr(mapped)


# ------------------------------------------------------------- evaluation


def test_evaluate_propagates_engine_errors():
    with pytest.raises(UnrepresentableResult):
        evaluate(parse("[0,1] \\ seq(limit=0, rule=harmonic(1), from=2)"))
    with pytest.raises(BadParameters):
        evaluate(parse("fatten([0,1], 0)"))


def test_evaluate_normalizes():
    h = evaluate(parse("[0,1] u [1,2] u {3/2}"))
    assert h == from_interval(Q(0), Q(2))
