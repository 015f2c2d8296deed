from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from treeharm.cli import (
    EXIT_FAILED,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_UNCLASSIFIED,
    canonical_number,
    dumps_json,
    main,
    parse_complex,
    parse_p,
    parse_ps,
    parse_tolerances,
)
from treeharm.errors import InvalidParameterError
from treeharm.radial import RadialFunction, radial_to_dict
from treeharm.spherical import spherical_eval
from treeharm.tree import make_tree_params

DOCS = Path(__file__).resolve().parents[1] / "docs"
H3 = ["--d0", "3", "--d1", "3", "--kappa", "1"]


def schema(name):
    return json.loads((DOCS / f"{name}.schema.json").read_text())


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, argv, name):
    code, out, err = run(capsys, argv)
    data = json.loads(out)
    jsonschema.validate(data, schema(name))
    assert dumps_json(data) == out  # parse -> emit is byte-identical
    return code, data, err


# -- parsing helpers ------------------------------------------------------------------------

@pytest.mark.parametrize("text,value", [
    ("0", 0), ("0.5", 0.5), ("1.2i", 1.2j), ("-i", -1j), ("i", 1j),
    ("0.5+1.2i", 0.5 + 1.2j), ("0.5-2j", 0.5 - 2j), ("1e-3+2e1i", 0.001 + 20j), (" 2 ", 2),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1+", "1+2k", "nan", "inf+1i", "1++2i"])
def test_parse_complex_rejects(text):
    with pytest.raises(InvalidParameterError):
        parse_complex(text)


def test_parse_p_and_ps():
    assert parse_p("inf") == math.inf and parse_p("2.5") == 2.5
    assert parse_ps("2,3,inf") == [2.0, 3.0, math.inf]
    for bad in ("", "2,,3", "x"):
        with pytest.raises(InvalidParameterError):
            parse_ps(bad)
    with pytest.raises(InvalidParameterError):
        parse_p("two")


def test_parse_tolerances():
    tol = parse_tolerances(["eigen=1e-9"])
    assert tol["eigen"] == 1e-9 and tol["oracle"] == 1e-12
    for bad in (["eigen"], ["nope=1"], ["eigen=-1"], ["eigen=x"]):
        with pytest.raises(InvalidParameterError):
            parse_tolerances(bad)


def test_canonical_numbers():
    assert canonical_number(1 / 3) == 0.333333333333333
    assert canonical_number(-0.0) == 0.0 and str(canonical_number(-0.0)) == "0.0"
    assert canonical_number(math.inf) == "inf"
    assert canonical_number(1 + 2j) == {"re": 1.0, "im": 2.0}


# -- spectrum -------------------------------------------------------------------------------

def test_spectrum_full(capsys):
    code, data, _ = run_json(capsys, ["spectrum", *H3], "spectrum")
    assert code == EXIT_OK and data["intervals"] == [[-1.0, 1.0]] and data["kind"] == "full"


def test_spectrum_p2(capsys):
    code, data, _ = run_json(capsys, ["spectrum", *H3, "--p", "2"], "spectrum")
    assert code == EXIT_OK
    (lo, hi), = data["intervals"]
    assert hi == pytest.approx(0.942809041582063, abs=1e-15) and lo == -hi


def test_spectrum_p_infinity_string(capsys):
    code, data, _ = run_json(capsys, ["spectrum", *H3, "--p", "inf"], "spectrum")
    assert code == EXIT_OK and data["p"] == "inf"


@pytest.mark.parametrize("argv", [
    ["spectrum", "--d0", "2", "--d1", "2", "--kappa", "1"],
    ["spectrum", "--d0", "3", "--d1", "4", "--kappa", "1"],
    ["spectrum", *H3, "--p", "1.5"],
    ["spectrum", "--d0", "3"],
    ["spectrum"],
    ["spectrum", "--preset", "homogeneous3", "--kappa", "1"],
    ["spectrum", "--preset", "bruhat-tits-q", "--q", "4", "--kappa", "1"],
    ["spectrum", "--preset", "bruhat-tits-q", "--q", "3"],
])
def test_spectrum_invalid_exit_2(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == EXIT_INVALID and out == "" and err.startswith("error:")


def test_spectrum_without_independence_exit_3(capsys):
    code, data, _ = run_json(capsys, ["spectrum", "--preset", "semihomog23", "--no-tits"], "spectrum")
    assert code == EXIT_UNCLASSIFIED and data["kind"] == "lower-bound"
    (lo, hi), = data["intervals"]
    assert -0.5 < lo < hi < 1


def test_bruhat_tits_preset(capsys):
    code, data, _ = run_json(capsys, ["spectrum", "--preset", "bruhat-tits-q", "--q", "3",
                                      "--kappa", "1"], "spectrum")
    assert code == EXIT_OK and data["params"]["d0"] == 4 and data["params"]["d1"] == 4


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--format", "xml", *H3])
    assert exc.value.code == EXIT_INVALID
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == EXIT_INVALID


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, ["spectrum", "--preset", "semihomog45", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and out.splitlines()[0].startswith("kind,")
    assert [r["kind"] for r in rows] == ["interval"] * len(rows)
    assert float(rows[0]["lo"]) == pytest.approx(-0.625, abs=1e-14)


# -- spherical ------------------------------------------------------------------------------

def test_spherical_z0_all_ones(capsys):
    code, data, _ = run_json(capsys, ["spherical", *H3, "--z", "0", "--r-max", "6"], "spherical")
    assert code == EXIT_OK
    assert [row["value"] for row in data["rows"]] == [{"re": 1.0, "im": 0.0}] * 7


def test_spherical_singular_flags_boundary(capsys, ):
    for preset in ("homogeneous3", "semihomog23", "semihomog45"):
        code, data, _ = run_json(capsys, ["spherical", "--preset", preset, "--z", "0.5"], "spherical")
        assert code == EXIT_OK and data["c"] is None
        assert {row["evaluator"] for row in data["rows"]} == {"boundary"}
        assert max(row["eigen_residual"] for row in data["rows"]) <= 1e-10


def test_spherical_matches_library(capsys):
    h3 = make_tree_params(3, 3, 1)
    code, data, _ = run_json(capsys, ["spherical", *H3, "--z", "0.3", "--r-max", "8"], "spherical")
    assert code == EXIT_OK
    for row in data["rows"]:
        want = spherical_eval(h3, 0.3, row["r"])
        got = complex(row["value"]["re"], row["value"]["im"])
        assert abs(got - want) <= 1e-14 * max(1, abs(want))
        assert row["evaluator"] == "closed-form"


def test_spherical_kappa_two_radii(capsys):
    code, data, _ = run_json(capsys, ["spherical", "--preset", "semihomog23", "--z", "0.2+1i",
                                      "--r-max", "7"], "spherical")
    assert [row["r"] for row in data["rows"]] == [0, 2, 4, 6]


def test_spherical_bad_z_exit_2(capsys):
    code, _, err = run(capsys, ["spherical", *H3, "--z", "0.5+x"])
    assert code == EXIT_INVALID and "error" in err


def test_spherical_csv(capsys):
    code, out, _ = run(capsys, ["spherical", *H3, "--z", "0.3", "--r-max", "3", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 4
    assert set(rows[0]) == {"kind", "r", "value_re", "value_im", "evaluator", "eigen_residual"}


# -- nesting --------------------------------------------------------------------------------

def test_nesting_examples(capsys):
    code, data, _ = run_json(capsys, ["nesting", *H3, "--ps", "2,inf"], "nesting")
    assert code == EXIT_OK and data["all_strict"]
    assert data["steps"][0]["witness_gamma"] == 1.0

    code, data, _ = run_json(capsys, ["nesting", *H3, "--ps", "2"], "nesting")
    assert code == EXIT_OK and data["steps"] == []

    code, data, _ = run_json(capsys, ["nesting", "--preset", "semihomog45", "--ps", "2,3,4,6,inf"],
                             "nesting")
    assert code == EXIT_OK and len(data["steps"]) == 4 and all(s["strict"] for s in data["steps"])


@pytest.mark.parametrize("ps", ["3,2", "1,2", "2,,3", "a"])
def test_nesting_malformed_exit_2(capsys, ps):
    code, _, _ = run(capsys, ["nesting", *H3, "--ps", ps])
    assert code == EXIT_INVALID


def test_nesting_without_independence(capsys):
    code, data, _ = run_json(capsys, ["nesting", *H3, "--no-tits"], "nesting")
    assert code == EXIT_UNCLASSIFIED and "lower_bound" in data


# -- verify ---------------------------------------------------------------------------------

def test_verify_oracle(capsys):
    code, data, err = run_json(capsys, ["verify", "--suite", "oracle", "--preset", "homogeneous3"],
                               "verify")
    assert code == EXIT_OK and data["passed"] and data["n_failed"] == 0 and err == ""


def test_verify_corrupted_kernel_fails(capsys):
    code, data, err = run_json(capsys, ["verify", "--suite", "psd", "--preset", "homogeneous3",
                                        "--corrupt-kernel"], "verify")
    assert code == EXIT_FAILED and not data["passed"]
    assert "FAILED psd" in err


def test_verify_tight_tolerance_fails(capsys):
    code, data, _ = run_json(capsys, ["verify", "--suite", "eigen", "--preset", "semihomog45",
                                      "--tol", "eigen=1e-30"], "verify")
    assert code == EXIT_FAILED and data["n_failed"] > 0


def test_verify_budget_exhaustion_fails(capsys):
    code, data, _ = run_json(capsys, ["verify", "--suite", "oracle", "--preset", "semihomog45",
                                      "--budget", "100"], "verify")
    assert code == EXIT_FAILED


def test_verify_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TREEHARM_BUDGET", "100")
    code, _, _ = run_json(capsys, ["verify", "--suite", "oracle", "--preset", "homogeneous3"], "verify")
    assert code == EXIT_FAILED
    monkeypatch.setenv("TREEHARM_BUDGET", "many")
    code, _, _ = run(capsys, ["verify", "--suite", "oracle", "--preset", "homogeneous3"])
    assert code == EXIT_INVALID


def test_verify_without_independence(capsys):
    code, data, _ = run_json(capsys, ["verify", "--suite", "spectrum", "--preset", "semihomog23",
                                      "--no-tits"], "verify")
    assert code == EXIT_UNCLASSIFIED and "lower_bounds" in data


def test_verify_csv_kind_column(capsys):
    code, out, _ = run(capsys, ["verify", "--suite", "lp", "--preset", "homogeneous3",
                                "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and rows and all(r["kind"] == "check" for r in rows)


# -- schemas and entry point ----------------------------------------------------------------

def test_radial_function_schema():
    f = RadialFunction(make_tree_params(2, 3, 2), {0: 1.0, 2: 0.5 + 0.25j, 6: -1.0})
    data = json.loads(f.to_json())
    jsonschema.validate(data, schema("radial_function"))
    assert data == radial_to_dict(f)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "treeharm.cli", "spectrum", *H3],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["intervals"] == [[-1.0, 1.0]]
    proc = subprocess.run([sys.executable, "-m", "treeharm.cli", "spectrum", "--d0", "2", "--d1", "2",
                           "--kappa", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
