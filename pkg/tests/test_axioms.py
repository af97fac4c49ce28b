"""Randomized property audits: deterministic verdicts, exact canonical
witnesses for the known failures, and sampled positives for the catalogue."""

import itertools
from fractions import Fraction as Q

import pytest

from meanlab.axioms import (
    PROPERTY_IDS,
    RECONSTRUCTED,
    GeneratorConfig,
    check,
    full_report,
    gen_dilution,
    gen_disjoint_pairs,
    gen_equal_mean_pairs,
    gen_nested_chain,
    gen_sets,
)
from meanlab.errors import BadConfig, BadParameters
from meanlab.exactset import set_diff, set_intersect, subset_of
from meanlab.limits import LimitSchedule
from meanlab.means import amean, avg1, resolve_mean
from meanlab.measure import DensityMeasure
from meanlab.values import values_close

CFG = GeneratorConfig()


def density_mean():
    return resolve_mean("m_mu",
                        density=DensityMeasure.from_parts([(0, 1, 2),
                                                           (1, 3, 1)]))


def witness_values(report):
    assert report.witness is not None
    return dict(report.witness.values)


# ---------------------------------------------------------------- structure


def test_property_catalogue_shape():
    assert len(PROPERTY_IDS) == 27
    assert len(set(PROPERTY_IDS)) == 27
    for pid in ("internal", "strict_strong_internal", "cantor_continuous",
                "u_bounded_infinite", "self_accumulated", "homogeneous"):
        assert pid in PROPERTY_IDS
    assert RECONSTRUCTED == {"accumulated", "convex", "mean_monotone",
                             "point_continuous", "slice_continuous",
                             "union_monotone"}
    assert RECONSTRUCTED < set(PROPERTY_IDS)


def test_rejects_unknown_property_and_bad_trials():
    k = resolve_mean("avg1")
    with pytest.raises(BadParameters):
        check("totally_made_up", k)
    with pytest.raises(BadParameters):
        check("internal", k, trials=0)


@pytest.mark.parametrize("bad", [dict(max_intervals=0), dict(coord_den=0),
                                 dict(coord_range=0), dict(max_redraws=0)])
def test_generator_config_validation(bad):
    with pytest.raises(BadConfig):
        GeneratorConfig(**bad)


def test_reports_are_deterministic():
    k = resolve_mean("amean")
    first = check("u_bounded_overlap", k, trials=5, seed=0)
    second = check("u_bounded_overlap", k, trials=5, seed=0)
    assert first == second
    assert first.property_id == "u_bounded_overlap"
    assert first.mean_id == "amean"
    assert first.seed == 0


def test_witness_replays_reverify():
    report = check("u_bounded_overlap", resolve_mean("amean"), trials=5,
                   seed=0)
    replays = report.witness.replays
    assert len(replays) == 4
    for thunk, expected in replays:
        assert values_close(thunk(), expected)


# ----------------------------------------------------- known failure cells


def test_avg_fat_escapes_the_accumulation_band():
    report = check("strict_internal", resolve_mean("avg_fat:1"), trials=5)
    assert report.verdict == "counterexample"
    assert report.trials == 1
    vals = witness_values(report)
    assert vals["K(H)"] == Q(3, 2)
    assert vals["liminf"] == Q(2)
    assert vals["limsup"] == Q(3)


def test_eds_fails_strict_internality():
    report = check("strict_internal", resolve_mean("eds:3"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H)"] == Q(4, 9)
    assert vals["liminf"] == Q(0)
    assert vals["limsup"] == Q(0)


def test_eds_is_not_reflection_invariant():
    report = check("reflection_invariant", resolve_mean("eds:3"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H)"] == Q(3, 2)
    assert vals["K(2s-H)"] == Q(5, 3)


def test_eds_moves_under_closure():
    report = check("closed", resolve_mean("eds:3"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H)"] == Q(4, 3)
    assert vals["K(cl H)"] == Q(3, 2)


def test_eds_depends_on_finite_parts():
    report = check("finite_independent", resolve_mean("eds:3"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H)"] == Q(3, 2)
    assert vals["K(H-F)"] == Q(17, 9)


def test_eds_slice_value_jumps():
    report = check("slice_continuous", resolve_mean("eds:3"), trials=5)
    assert report.verdict == "counterexample"
    assert report.reconstructed
    vals = witness_values(report)
    assert vals["K(slice at 3)"] == Q(3, 2)
    assert vals["K(nearby slice)"] == Q(8, 9)


def test_iso_is_not_monotone():
    report = check("monotone", resolve_mean("iso:4"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H1)"] == Q(75, 8)
    assert vals["K(H2)"] == Q(57, 4)
    assert vals["K(H1uH2)"] == Q(29, 4)


def test_avg1_is_not_hausdorff_continuous():
    report = check("hausdorff_continuous", resolve_mean("avg1"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(limit)"] == Q(1)
    assert vals["K(deep member)"] == Q(3, 2)


def test_m_acc_is_not_equi_monotone():
    report = check("equi_monotone", resolve_mean("m_acc"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H1)"] == Q(0)
    assert vals["K(H2)"] == Q(2)
    assert vals["K(H1uH2)"] == Q(0)


def test_amean_overlap_bound_fails():
    report = check("u_bounded_overlap", resolve_mean("amean"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H)"] == Q(0)
    assert vals["K(HuH1)"] == Q(0)
    assert vals["K(HuH2)"] == Q(1, 3)
    assert vals["K(H u all)"] == Q(1, 2)


def test_amean_depends_on_finite_parts():
    report = check("finite_independent", resolve_mean("amean"), trials=5)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(H)"] == Q(-1, 24)
    assert vals["K(HuF)"] == Q(91, 36)


def test_nested_chain_defeats_avg_fat():
    cfg = GeneratorConfig(schedule=LimitSchedule(
        indices=tuple(2 ** j for j in range(4, 17)), tolerance=1e-5))
    report = check("cantor_continuous", resolve_mean("avg_fat:1/100"),
                   gen=cfg, trials=3)
    assert report.verdict == "counterexample"
    vals = witness_values(report)
    assert vals["K(intersection)"] == Q(51, 50)
    assert abs(vals["K(deep chain member)"] - Q(51, 50)) > Q(1, 4)


def test_avg_fat_slice_jump_found_by_search():
    # Two-sided slice comparison: a slice boundary that crosses an isolated
    # point makes the value of the upper slice jump.
    report = check("slice_continuous", resolve_mean("avg_fat:1/4"), trials=5)
    assert report.verdict == "counterexample"
    assert report.reconstructed
    for thunk, expected in report.witness.replays:
        assert values_close(thunk(), expected)


def test_density_mean_is_not_translation_invariant():
    report = check("translation_invariant", density_mean(), trials=12, seed=1)
    assert report.verdict == "counterexample"


# ------------------------------------------------------------ inapplicable


def test_not_applicable_cells():
    assert check("u_bounded_infinite", resolve_mean("amean"),
                 trials=5).verdict == "not_applicable"
    assert check("self_accumulated", resolve_mean("eds:3"),
                 trials=5).verdict == "not_applicable"
    assert check("accumulated", resolve_mean("amean"),
                 trials=5).verdict == "not_applicable"


# -------------------------------------------------------- sampled positives


def assert_holds(k, pids, trials, seed):
    for pid in pids:
        report = check(pid, k, trials=trials, seed=seed)
        assert report.verdict == "holds_on_sample", (pid, report.verdict)
        assert report.witness is None
        assert report.trials >= 1
        assert report.reconstructed == (pid in RECONSTRUCTED)


def test_avg1_positive_matrix():
    pids = [p for p in PROPERTY_IDS if p != "hausdorff_continuous"]
    assert_holds(resolve_mean("avg1"), pids, trials=12, seed=1)


def test_amean_positive_matrix():
    assert_holds(resolve_mean("amean"),
                 ["internal", "translation_invariant", "homogeneous",
                  "reflection_invariant", "convex", "equi_monotone",
                  "u_bounded", "closed", "self_accumulated", "monotone"],
                 trials=12, seed=1)


def test_m_acc_positive_matrix():
    assert_holds(resolve_mean("m_acc"),
                 ["internal", "accumulated", "self_accumulated",
                  "translation_invariant", "homogeneous",
                  "reflection_invariant", "u_bounded"],
                 trials=12, seed=1)


def test_avg_fat_positive_matrix():
    assert_holds(resolve_mean("avg_fat:1/4"),
                 ["cantor_continuous_compact", "hausdorff_continuous",
                  "monotone", "closed"],
                 trials=6, seed=1)


def test_density_mean_additivity_bounds():
    assert_holds(density_mean(),
                 ["u_bounded", "u_bounded_n_fold", "internal"],
                 trials=12, seed=1)


# --------------------------------------------------------------- reporting


def test_full_report_preserves_order():
    props = ["internal", "slice_continuous", "accumulated"]
    reports = full_report(resolve_mean("avg1"), properties=props, trials=4,
                          seed=2)
    assert [r.property_id for r in reports] == props
    assert all(r.mean_id == "avg1" for r in reports)
    assert [r.reconstructed for r in reports] == [False, True, True]


# -------------------------------------------------------------- generators


def test_gen_sets_is_deterministic():
    first = list(itertools.islice(gen_sets(CFG, 7), 10))
    second = list(itertools.islice(gen_sets(CFG, 7), 10))
    assert first == second
    assert all(not h.is_empty for h in first)


def test_gen_disjoint_pairs_are_disjoint():
    pairs = list(itertools.islice(gen_disjoint_pairs(CFG, 3), 10))
    assert all(set_intersect(a, b).is_empty for a, b in pairs)


def test_gen_equal_mean_pairs_match_exactly():
    pairs = list(itertools.islice(gen_equal_mean_pairs(CFG, 5), 10))
    for a, b in pairs:
        assert avg1(a) == avg1(b)
        assert set_intersect(a, b).is_empty


def test_gen_nested_chain_shrinks():
    chain = [gen_nested_chain(j) for j in range(6)]
    for deeper, shallower in zip(chain[1:], chain):
        assert subset_of(deeper, shallower)
    with pytest.raises(BadParameters):
        gen_nested_chain(-1)


def test_gen_dilution_families_thin_out():
    family, target = next(gen_dilution(CFG, 11))
    h, removed = family(256)
    assert amean(h) == target
    assert subset_of(removed, h)
    deviations = [abs(amean(set_diff(*family(n))) - target)
                  for n in (256, 1024)]
    assert deviations[1] < deviations[0]
