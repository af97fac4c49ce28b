"""Command-line interface: golden outputs, JSON shapes, exit codes."""

import io
import json
import sys

import pytest

from meanlab.cli import main


def run_cli(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def error_payload(err_text):
    return json.loads(err_text)["error"]


# --------------------------------------------------------------------- eval


def test_eval_plain_value(capsys):
    code, out, err = run_cli(capsys, ["eval", "--mean", "avg1", "--set",
                                      "[0,1] u [3,4]"])
    assert code == 0
    assert out == "2 (exact 2/1)\n"
    assert err == ""


def test_eval_json_shape(capsys):
    code, out, _ = run_cli(capsys, ["eval", "--mean", "avg1", "--set",
                                    "[0,1] u [3,4]", "--json"])
    assert code == 0
    assert json.loads(out) == {
        "command": "eval", "mean": "avg1",
        "values": {"H": {"num": 2, "den": 1,
                         "decimal": "2.000000000000"}}}


def test_eval_two_sets_reports_parts_and_union(capsys):
    code, out, _ = run_cli(capsys, ["eval", "--mean", "avg1", "--f", "square",
                                    "--set", "[0,1] u [2,3]",
                                    "--set2", "(1,2)"])
    assert code == 0
    assert out == ("H1: 2.345207879912 (exact 11/2^(1/2))\n"
                   "H2: 1.581138830084 (exact 5/2^(1/2))\n"
                   "H1 u H2: 2.12132034356 (exact 9/2^(1/2))\n")


def test_eval_renders_root_values(capsys):
    code, out, _ = run_cli(capsys, ["eval", "--mean", "avg1", "--f", "square",
                                    "--set", "[0,1]"])
    assert code == 0
    assert out == "0.707106781187 (exact 1/2^(1/2))\n"


def test_eval_density_flag(capsys):
    code, out, _ = run_cli(capsys, ["eval", "--mean", "m_mu", "--density",
                                    "0,1,2;1,3,1", "--set", "[0,1]"])
    assert code == 0
    assert out == "0.5 (exact 1/2)\n"


def test_eval_reads_stdin(capsys, monkeypatch):
    code, out, _ = run_cli(capsys, ["eval", "--mean", "amean", "--set", "-"],
                           stdin="{0,1,5}\n", monkeypatch=monkeypatch)
    assert code == 0
    assert out == "2 (exact 2/1)\n"


# -------------------------------------------------------------------- limit


def test_limit_reports_estimate_and_trace(capsys):
    code, out, _ = run_cli(capsys, ["limit", "--mean", "lavg", "--set",
                                    "{0} u [2,3]", "--tol", "1e-9"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "estimate 2.5 ± 1e-09"
    assert lines[1] == "n,value"
    assert len(lines) == 19  # doubling schedule 16 .. 2^20
    assert lines[2] == "16,2.250000000000"
    assert lines[-1].startswith("1048576,2.4999")


def test_limit_json_shape(capsys):
    code, out, _ = run_cli(capsys, ["limit", "--mean", "lavg", "--set",
                                    "{0} u [2,3]", "--tol", "1e-9", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "limit"
    assert payload["estimate"] == {"num": 5, "den": 2}
    assert payload["error"] == {"num": 1, "den": 1000000000}
    assert len(payload["trace"]) == 17
    assert payload["trace"][0] == {"n": 16, "value": {"num": 9, "den": 4}}


def test_limit_rejects_non_limit_means(capsys):
    code, _, err = run_cli(capsys, ["limit", "--mean", "amean", "--set",
                                    "{0,1}"])
    assert code == 1
    assert error_payload(err)["code"] == "bad_parameters"


def test_limit_reports_non_convergence(capsys):
    code, _, err = run_cli(capsys, ["limit", "--mean", "m_eds", "--set",
                                    "{0} u [2,3]"])
    assert code == 1
    payload = error_payload(err)
    assert payload["code"] == "no_convergence"
    assert payload["steps"] == 17
    assert len(payload["trace"]) == 17
    assert payload["trace"][0][0] == 16


# ------------------------------------------------------------------- derive


def test_derive_at_a_point(capsys):
    code, out, _ = run_cli(capsys, ["derive", "--mean", "avg1", "--set",
                                    "[0,1]", "--at", "0"])
    assert code == 0
    assert out == ("derivative 0.5 (exact 1/2); spread 0.5 (exact 1/2); "
                   "occupancy hint 1/2\n")


def test_derive_side_probe(capsys):
    code, out, _ = run_cli(capsys, ["derive", "--mean", "avg1", "--set",
                                    "[0,1] u [7,8]", "--side", "sup_append"])
    assert code == 0
    assert out == "probe 2 (exact 2/1) (exact)\n"


def test_derive_needs_exactly_one_mode(capsys):
    for extra in ([], ["--at", "0", "--side", "sup_append"]):
        code, _, err = run_cli(capsys, ["derive", "--mean", "avg1",
                                        "--set", "[0,1]", *extra])
        assert code == 1
        assert error_payload(err)["code"] == "bad_parameters"


# -------------------------------------------------------- accpoints, bounds


def test_accpoints_prints_an_expression(capsys):
    code, out, _ = run_cli(capsys, ["accpoints", "--mean", "avg1", "--set",
                                    "[0,1) u {5}"])
    assert code == 0
    assert out == "[0,1]\n"


def test_bounds_prints_both_ends(capsys):
    code, out, _ = run_cli(capsys, ["bounds", "--mean", "avg1", "--set",
                                    "{0} u [2,3] u {9}"])
    assert code == 0
    assert out == "liminf 2 (exact 2/1)\nlimsup 3 (exact 3/1)\n"


# ------------------------------------------------------------ props, report


def test_props_prints_the_counterexample_story(capsys):
    code, out, _ = run_cli(capsys, ["props", "--mean", "macc", "--suite",
                                    "equi-monotone", "--trials", "100",
                                    "--seed", "7"])
    assert code == 0
    assert out == (
        "equi_monotone on m_acc: counterexample (trials=1, seed=7)\n"
        "  note: union keeps the mean but the parts disagree\n"
        "  K(H1) = 0 (exact 0/1)\n"
        "  K(H2) = 2 (exact 2/1)\n"
        "  K(H1uH2) = 0 (exact 0/1)\n"
        "  set 1: seq(limit=0, rule=harmonic(1), from=1)\n"
        "  set 2: {2}\n"
        "  set 3: {2} u seq(limit=0, rule=harmonic(1), from=1)\n")


def test_props_json_is_deterministic(capsys):
    argv = ["props", "--mean", "macc", "--suite", "equi-monotone",
            "--trials", "100", "--seed", "7", "--json"]
    code, first, _ = run_cli(capsys, argv)
    assert code == 0
    _, second, _ = run_cli(capsys, argv)
    assert first == second
    report = json.loads(first)["reports"][0]
    assert report["verdict"] == "counterexample"
    assert report["witness"]["sets"] == [
        "seq(limit=0, rule=harmonic(1), from=1)",
        "{2}",
        "{2} u seq(limit=0, rule=harmonic(1), from=1)"]


def test_report_emits_csv(capsys):
    code, out, _ = run_cli(capsys, ["report", "--mean", "avg1", "--suite",
                                    "internal,monotone,closed,accumulated",
                                    "--trials", "8", "--seed", "1", "--csv"])
    assert code == 0
    assert out == ("property,mean,verdict,trials,seed,reconstructed\n"
                   "internal,avg1,holds_on_sample,8,1,false\n"
                   "monotone,avg1,holds_on_sample,8,1,false\n"
                   "closed,avg1,holds_on_sample,8,1,false\n"
                   "accumulated,avg1,holds_on_sample,8,1,true\n")


def test_report_rejects_unknown_property(capsys):
    code, _, err = run_cli(capsys, ["props", "--mean", "avg1", "--suite",
                                    "bogus-prop"])
    assert code == 1
    assert error_payload(err)["code"] == "bad_parameters"


# -------------------------------------------------------------- error paths


def test_parse_errors_exit_two_with_location(capsys):
    code, _, err = run_cli(capsys, ["eval", "--mean", "avg1", "--set",
                                    "[0,1"])
    assert code == 2
    payload = error_payload(err)
    assert payload["code"] == "parse_error"
    assert payload["line"] == 1
    assert payload["column"] == 5


def test_engine_errors_exit_one(capsys):
    code, _, err = run_cli(capsys, ["eval", "--mean", "avg1", "--set", "{0}"])
    assert code == 1
    assert error_payload(err)["code"] == "null_set"
    code, _, err = run_cli(capsys, ["eval", "--mean", "wibble", "--set",
                                    "{0}"])
    assert code == 1
    assert error_payload(err)["code"] == "bad_parameters"


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--set", "{0}"])
    assert exc.value.code == 2
    capsys.readouterr()
