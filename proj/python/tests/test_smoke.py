import json
from fractions import Fraction

import pytest

import fpa

UNIFORM = {"kind": "uniform"}


def test_eval_and_explicit():
    assert fpa.eval_cdf({"kind": "power", "exponent": 2}, "1/2") == "1/4"
    assert fpa.canonical_bid(UNIFORM, 2, "2/3") == "1/3"
    assert fpa.canonical_bid({"kind": "power", "exponent": 2}, 2, "3/4") == "1/2"


def test_blackbox_sandwich():
    xs = [i / 50 for i in range(51)]
    out = fpa.blackbox_bids(UNIFORM, 3, 1 / 16, xs)
    assert out["K"] == 16
    assert out["queries"] == 15 + len(xs)
    for x, lo, b, hi in zip(xs, out["lower"], out["bids"], out["upper"]):
        assert lo <= 2 * x / 3 + 1e-12 <= hi + 2e-12
        assert 0 <= b <= x + 1e-15


def test_cdfpa_solve():
    doc = fpa.solve_cdfpa(UNIFORM, 2, ["0", "1/4", "1/2", "3/4"], "1/16", delta="1/281474976710656")
    assert doc["certificate"]["pass"]
    s = [float(Fraction(x)) if "/" in x else float(x) for x in doc["s"]]
    assert s[0] == 0 and s[-1] == 1
    assert all(a <= b for a, b in zip(s, s[1:]))


def test_run_round_trip():
    code, out, err = fpa.run("solve", "--model", "cdfpa", "--cdf", json.dumps(UNIFORM), "--n", 2, "--eps", "1/16",
                             "--bids", '["0","1/2"]', "--delta", "1/281474976710656")
    assert code == 0, err
    code, report, err = fpa.run("verify", "--strategy", out, "--cdf", json.dumps(UNIFORM), "--n", 2, "--mode", "exact",
                                "--eps", "1/16")
    assert code == 0, err
    assert json.loads(report)["within_eps"]


def test_errors():
    with pytest.raises(ValueError):
        fpa.canonical_bid(UNIFORM, 2, "3/2")
    with pytest.raises(ValueError):
        fpa.eval_cdf({"kind": "nope"}, "1/2")
    code, _, _ = fpa.run("solve", "--model", "cdfpa", "--cdf", json.dumps(UNIFORM), "--n", 2)
    assert code == 2
