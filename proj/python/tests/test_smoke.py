import pathlib

import pytest

import fitchcalc

CORPUS = pathlib.Path(__file__).resolve().parents[2] / "corpus"


def test_modes():
    assert fitchcalc.modes() == ["ik", "ikd", "is4", "is4d", "ir", "ird"]


def test_check_k_and_t():
    k = fitchcalc.check("ik", "f : [](A -> B), x : []A", "shut (open f (open x))")
    assert k == "[]B"
    assert fitchcalc.check("is4", "x : []A", "open x", "A") == "A"
    with pytest.raises(fitchcalc.FitchError) as e:
        fitchcalc.check("ik", "x : []A", "open x", "A")
    assert e.value.kind == "NoLockForOpen"


def test_parse_error_kind():
    with pytest.raises(fitchcalc.FitchError) as e:
        fitchcalc.check("ik", "", "\\x:A.")
    assert e.value.kind == "ParseError"


def test_normalize_trace():
    r = fitchcalc.normalize("open shut (\\x:A. x) y")
    assert r["normal"] == "y"
    assert r["steps"] == len(r["trace"]) == 2
    assert r["trace"][0][0] == "BetaBox"


def test_derivations_of_double_open():
    assert fitchcalc.count_derivations("is4", "x : [][]A, #, #", "open open x", "A") == 3
    assert fitchcalc.count_derivations("ik", "x : [][]A, #, #", "open open x", "A") == 1


def test_def_eq():
    assert fitchcalc.def_eq("is4d", "x : []A", "shut shut open x", "shut shut open x", "[][]A")["verdict"] == "Equal"
    assert fitchcalc.def_eq("ik", "x : A * A", "(snd x, fst x)", "x", "A * A")["verdict"] == "Distinct"


def test_suite_report():
    r = fitchcalc.run_suite("subject-reduction", "is4", samples=50, seed=7)
    assert r["failed"] == 0 and r["samples"] == 50
    assert r == fitchcalc.run_suite("subject-reduction", "is4", samples=50, seed=7, workers=2)
    assert "coherence" in fitchcalc.suite_names()


def test_cli_exit_codes():
    assert fitchcalc.run_cli(["check", str(CORPUS / "axioms" / "k.fmlc"), "--mode", "ik"])[0] == 0
    assert fitchcalc.run_cli(["check", str(CORPUS / "axioms" / "t.fmlc"), "--mode", "ik"])[0] == 1
    assert fitchcalc.run_cli(["bogus"])[0] == 2
