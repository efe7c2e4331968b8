import json
import math

import numpy as np
import pytest

from gandist.harness import (ErmConfig, Verdict, power_bracket, run_approx_sweep, run_erm, run_example1,
                             run_named, run_penalty_sandwich, run_rate, run_sandwich)


@pytest.mark.parametrize("x, want", [(4, 4), (0.25, 0.5), (1, 1)])
def test_power_bracket(x, want):
    assert power_bracket(x) == want


def test_power_bracket_domain():
    with pytest.raises(ValueError):
        power_bracket(0.0)


def test_verdict_margin():
    v = Verdict.le("x", 1.0, 0.9, 0.2)
    assert v.passed and math.isclose(v.margin, 0.1)
    assert not Verdict.le("y", 1.0, 0.9).passed


def test_sandwich_identical_trials_are_zero():
    rep = run_sandwich(trials=4, identical=4, include_example=False)
    assert rep.passed
    for r in rep.rows:
        assert abs(r["v"]) <= 1e-9 and r["w1"] <= 1e-12 and r["lower"] <= 1e-12


def test_sandwich_small_run_passes_in_2d_and_3d():
    for d, p in [(2, "1"), (3, "inf")]:
        rep = run_sandwich(trials=10, d=d, p=p, seed=9)
        assert rep.passed, rep.summary()


def test_sandwich_rejects_bad_config():
    with pytest.raises(ValueError):
        run_sandwich(trials=2, L=2.0)
    with pytest.raises(ValueError):
        run_sandwich(trials=2, d=4)


def test_penalty_identical_bracket_contains_zero():
    rep = run_penalty_sandwich(trials=3, identical=3)
    assert rep.passed
    for r in rep.rows:
        assert r["lower"] <= 1e-9 and r["upper"] >= -1e-9


def test_example1_regimes():
    rep = run_example1(gammas=(0.02, 0.05, 0.1, 0.3, 0.5))
    rows = {r["gamma"]: r for r in rep.rows}
    assert rows[0.3]["a_star"] == 20 and rows[0.5]["a_star"] == 20
    assert all(rows[g]["a_star"] < 20 for g in (0.02, 0.05, 0.1))
    vs = [rows[g]["v"] for g in sorted(rows)]
    assert vs == sorted(vs)
    for r in rep.rows:
        if r["regime"] == "quadratic":
            assert r["low"] <= r["v"] <= r["high_L"]


def test_rate_small():
    rep = run_rate(ns=(50, 200, 800), trials=10, seed=1)
    assert rep.rows[0]["mean_w1"] > rep.rows[-1]["mean_w1"]


def test_rate_2d_reference_grid():
    rep = run_rate(d=2, ns=(20, 80), trials=3, seed=1, ref_k=16)
    assert len(rep.rows) == 2 and rep.rows[0]["mean_w1"] > rep.rows[1]["mean_w1"]


def test_approx_zero_target():
    rep = run_approx_sweep(fn="zero", eps_list=(0.2,), support_points=100)
    assert rep.passed
    assert rep.rows[0]["sup_error"] == 0.0


def test_reports_are_deterministic():
    a = run_sandwich(trials=5, seed=11).to_dict(timing=False)
    b = run_sandwich(trials=5, seed=11).to_dict(timing=False)
    assert json.dumps(a) == json.dumps(b)
    c = run_erm({"seeds": [3], "n": 2000, "holdout": 20000, "cover_seeds": 0}).to_dict(timing=False)
    d = run_erm({"seeds": [3], "n": 2000, "holdout": 20000, "cover_seeds": 0}).to_dict(timing=False)
    assert json.dumps(c, default=str) == json.dumps(d, default=str)


def test_erm_config_validation():
    with pytest.raises(ValueError):
        ErmConfig.from_dict({"bogus": 1})
    with pytest.raises(ValueError):
        run_erm({"planted": [0.22, 0.5], "seeds": [0]})


def test_report_files(tmp_path):
    rep = run_named("example1", {"gammas": [0.3]})
    rep.save(tmp_path / "r.json")
    rep.save_csv(tmp_path / "r.csv")
    data = json.loads((tmp_path / "r.json").read_text())
    assert data["name"] == "example1" and data["passed"]
    header = (tmp_path / "r.csv").read_text().splitlines()[0]
    assert header.startswith("gamma,regime,a_star")
