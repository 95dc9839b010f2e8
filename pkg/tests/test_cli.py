import json
import subprocess
import sys

import pytest

from quiver_codim.cli import jsonable, main, parse_dims, run
from quiver_codim.errors import InvalidInputError


def run_json(*args):
    text, code = run(["--format", "json", *args])
    assert code == 0
    return json.loads(text)


def test_components_json_shape():
    out = run_json("components", "-d", "2,2,3")
    assert set(out) == {"input", "method", "C", "theta", "details"}
    assert (out["C"], out["theta"]) == (4, 2)
    assert out["input"] == {"dims": [2, 2, 3], "r": 0, "permutation": [0, 1, 2]}


def test_components_closed_on_large_vector():
    out = run_json("components", "-d", "4,4,4,5,5,5,5,5,5,6,6,6", "--method", "closed")
    assert (out["C"], out["theta"]) == (12, 28)


def test_components_with_zero_entry():
    out = run_json("components", "-d", "3,0,3")
    assert (out["C"], out["theta"]) == (0, 1)


def test_components_witnesses():
    out = run_json("components", "-d", "2,2,2", "--method", "brute", "--emit-witnesses")
    assert [w["codim"] for w in out["details"]["witnesses"]] == [3]


def test_format_after_subcommand():
    text, code = run(["components", "-d", "2,2,2", "--format", "json"])
    assert code == 0 and json.loads(text)["C"] == 3


def test_pseries():
    out = run_json("pseries", "-d", "3,3,3", "-T", "11")
    assert out["details"]["series"]["coefficients"][7:] == ["2", "8", "27", "67", "151"]
    assert out["method"] == "closed"
    assert (out["C"], out["theta"]) == (7, 2)
    out = run_json("pseries", "-d", "3,3,3", "-T", "9", "--method", "auto")
    assert out["method"] == "closed+brute"


def test_rlct():
    out = run_json("rlct", "-d", "2,2,2")
    assert out["details"]["rlct"] == "3/2"
    assert out["details"]["rlcm"] == 0
    assert out["details"]["flags"] == ["fractional_part_zero"]


def test_qip():
    out = run_json("qip", "-d", "8,8,11,11,11,13,13,13,15")
    assert out["details"]["optimum"] == 55 and out["theta"] == 4
    assert out["method"] == "closed+qip"


def test_orbits_and_ideal():
    out = run_json("orbits", "-d", "2,2,2")
    assert out["details"]["total_orbits"] == 10
    assert sorted(o["codim"] for o in out["details"]["closure_components"]) == [3, 4, 4]
    out = run_json("ideal", "-d", "2,2,3", "--emit-witnesses")
    assert (out["C"], out["theta"]) == (4, 2)
    assert len(out["details"]["kernel_basis"]) == 2
    out = run_json("ideal", "-d", "2,2,3", "-n", "3")
    assert out["details"]["kernel_rank"] == 0


def test_selfcheck_command():
    out = run_json("selfcheck", "--bound", "0")
    assert out["details"]["passed"] is True and out["details"]["cases"] == 0


def test_text_output(capsys):
    assert main(["components", "-d", "3,2,2"]) == 0
    text = capsys.readouterr().out
    assert "C = 4" in text and "theta = 2" in text and "sorting permutation" in text


@pytest.mark.parametrize("argv, code", [
    (["components", "-d", "2,x"], 2),
    (["components", "-d", "2"], 2),
    (["components", "-d", "2,2", "-r", "3"], 2),
    (["qip", "-d", "8,8,11,11,11,13,13,13,15", "--method", "qip", "--cap", "5"], 3),
    (["ideal", "-d", "2,2,3", "--n-max", "3"], 3),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().err.startswith("error:")


def test_disagreement_exit_code(monkeypatch, capsys):
    import importlib
    comp = importlib.import_module("quiver_codim.components")
    monkeypatch.setattr(comp, "theta_closed_form", lambda d, r=0: 7)
    assert main(["components", "-d", "2,2,2"]) == 4


def test_json_big_integers_and_fractions():
    from fractions import Fraction
    assert jsonable({"a": 2**60, "b": Fraction(3, 2), "c": (1, 2)}) == {"a": str(2**60), "b": "3/2", "c": [1, 2]}
    assert jsonable(2**53) == 2**53


def test_parse_dims():
    assert parse_dims("2, 2,3") == (2, 2, 3)
    with pytest.raises(InvalidInputError):
        parse_dims("2,-1")


def test_output_is_deterministic():
    a = run(["--format", "json", "qip", "-d", "7,7,8,9,12,13"])
    b = run(["--format", "json", "qip", "-d", "7,7,8,9,12,13"])
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quiver_codim", "--format", "json", "components", "-d", "2,3,2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["theta"] == 2
