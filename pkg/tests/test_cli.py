import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from polytri.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, render, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv)
    assert code == EXIT_OK
    return json.loads(out)


def test_moments_ears():
    rec = call_json("moments", "--n", "6", "--weight", "ears", "--method", "gf", "--format", "json")
    assert rec["payload"]["mean"] == "15/7"
    assert rec["payload"]["variance"] == "6/49"
    assert set(rec) == {"command", "n", "weight", "method", "payload", "meta"}
    assert set(rec["meta"]) == {"seed", "samples", "runtime_ms"}


@pytest.mark.parametrize("method", ["gf", "closed", "enum"])
@pytest.mark.parametrize("weight", ["ears", "oneside", "degree", "bluecount:1"])
def test_exact_methods_agree(method, weight):
    rec = call_json("moments", "--n", "8", "--weight", weight, "--method", method)
    ref = call_json("moments", "--n", "8", "--weight", weight, "--method", "gf")
    assert rec["payload"]["mean"] == ref["payload"]["mean"]
    assert rec["payload"]["variance"] == ref["payload"]["variance"]


def test_numeric_method():
    rec = call_json("moments", "--n", "6", "--weight", "ears", "--method", "numeric")
    # reals carry 12 significant digits
    assert rec["payload"]["mean"] == pytest.approx(15 / 7, rel=5e-12)


def test_sample_oneside():
    rec = call_json("sample", "--n", "9", "--weight", "oneside", "--samples", "100000", "--seed", "42")
    p = rec["payload"]
    assert abs(p["mean"] - 45 / 13) <= 3 * p["stderr"]
    assert rec["meta"]["seed"] == 42 and rec["meta"]["samples"] == 100000


def test_sample_emit():
    rec = call_json("sample", "--n", "6", "--weight", "ears", "--samples", "5", "--emit-triangulations")
    rows = rec["payload"]["triangulations"]
    assert len(rows) == 5
    assert all(r["triangulation"].startswith("6;") for r in rows)
    assert {r["S"] for r in rows} <= {"2", "3"}


def test_portfolio():
    assert call_json("portfolio", "--n", "4", "--k", "2,0")["payload"]["probability"] == "1/2"


def test_dist_sorted():
    entries = call_json("dist", "--n", "7", "--weight", "degree")["payload"]["entries"]
    values = [Fraction(e["value"]) for e in entries]
    assert values == sorted(values)
    assert sum(Fraction(e["probability"]) for e in entries) == 1


def test_dist_methods_agree():
    a = call_json("dist", "--n", "8", "--weight", "bluesum", "--method", "gf")["payload"]
    b = call_json("dist", "--n", "8", "--weight", "bluesum", "--method", "enum")["payload"]
    assert a == b


def test_formula_command():
    rec = call_json("formula", "--id", "curious_mean", "--n", "4", "--w", "2")
    assert rec["payload"]["value"] == "22/3"


def test_enumerate_text():
    code, out, _ = call("enumerate", "--n", "5")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 5


def test_enumerate_json():
    rec = call_json("enumerate", "--n", "6", "--format", "json")
    assert rec["payload"]["count"] == 14


def test_enumerate_cap():
    code, _, err = call("enumerate", "--n", "13")
    assert code == EXIT_DOMAIN and "error" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("nope",),
        ("moments", "--n", "6"),
        ("moments", "--n", "6", "--weight", "ears", "--method", "magic"),
        ("dist", "--n", "x", "--weight", "ears"),
    ],
)
def test_usage_errors(argv, capsys):
    assert call(*argv)[0] == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ("moments", "--n", "2", "--weight", "ears"),
        ("moments", "--n", "6", "--weight", "bogus"),
        ("moments", "--n", "6", "--weight", "bluecount:9"),
        ("portfolio", "--n", "5", "--k", "1,0"),
        ("moments", "--n", "6", "--weight", "area", "--method", "gf"),
    ],
)
def test_domain_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_DOMAIN
    assert out == "" and err.startswith("error:")


@pytest.mark.parametrize(
    "argv",
    [
        ("moments", "--n", "9", "--weight", "ears", "--method", "mc", "--samples", "3000"),
        ("sample", "--n", "7", "--weight", "inradius", "--samples", "500", "--seed", "3", "--emit-triangulations"),
        ("dist", "--n", "9", "--weight", "oneside"),
    ],
)
def test_byte_identical(argv):
    assert call(*argv)[1] == call(*argv)[1]


def test_timing_is_opt_in():
    rec = call_json("moments", "--n", "6", "--weight", "ears")
    assert rec["meta"]["runtime_ms"] is None
    rec = call_json("moments", "--n", "6", "--weight", "ears", "--timing")
    assert rec["meta"]["runtime_ms"] >= 0


@pytest.mark.parametrize(
    "argv",
    [
        ("moments", "--n", "7", "--weight", "bluesum"),
        ("moments", "--n", "7", "--weight", "perimeter", "--method", "numeric"),
        ("dist", "--n", "7", "--weight", "ears"),
        ("portfolio", "--n", "6", "--k", "2,1,0,0"),
    ],
)
def test_csv_json_equivalence(argv):
    payload = call_json(*argv)["payload"]
    code, out, _ = call(*argv, "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    if "entries" in payload:
        expected = [{k: str(v) for k, v in e.items()} for e in payload["entries"]]
    else:
        expected = [{k: str(v) for k, v in payload.items()}]
    assert rows == expected


@pytest.mark.parametrize("x, expected", [(Fraction(6, 4), "3/2"), (Fraction(4, 2), "2"), (3, 3),
                                         (1 / 3, 0.333333333333)])
def test_render(x, expected):
    assert render(x) == expected


def test_verify_exit_zero():
    rec = call_json("verify", "--n-max", "9")
    assert rec["payload"]["failed"] == 0
    assert len(rec["payload"]["checks"]) == rec["payload"]["passed"]
    assert any(c["detail"].startswith("INFO") for c in rec["payload"]["checks"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polytri", "portfolio", "--n", "4", "--k", "2,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["probability"] == "1/2"
