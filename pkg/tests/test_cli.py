import json

import pytest

from gandist.cli import main


@pytest.fixture
def pair(tmp_path):
    p = tmp_path / "p.json"
    q = tmp_path / "q.json"
    p.write_text(json.dumps({"dim": 1, "atoms": [[0.1], [0.35]], "weights": [0.5, 0.5]}))
    q.write_text(json.dumps({"dim": 1, "atoms": [[0.05], [0.25]], "weights": [0.5, 0.5]}))
    return p, q


def test_w1_and_plan(pair, tmp_path, capsys):
    p, q = pair
    plan = tmp_path / "plan.json"
    assert main(["w1", "--lhs", str(p), "--rhs", str(q), "--emit-plan", str(plan)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["w1"] - 0.075) <= 1e-12
    assert abs(sum(map(sum, json.loads(plan.read_text())["matrix"])) - 1) <= 1e-12


def test_vanilla_with_witness(pair, tmp_path, capsys):
    p, q = pair
    wit = tmp_path / "w.json"
    assert main(["vanilla", "--class", "lip:5,3", "--lhs", str(p), "--rhs", str(q), "--emit-witness", str(wit)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] > 0
    assert len(json.loads(wit.read_text())["values"]) == 4


def test_bad_weights_exit_code(tmp_path, capsys):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"dim": 1, "atoms": [[0.1]], "weights": [0.7]}))
    assert main(["w1", "--lhs", str(p), "--rhs", str(p)]) == 2
    assert main(["w1", "--lhs", str(p), "--rhs", str(p), "--renormalize"]) == 0


def test_affine_example(capsys):
    assert main(["affine-example", "--gamma", "0.3"]) == 0
    assert json.loads(capsys.readouterr().out)["a_star"] == 20.0


def test_build_and_certify(tmp_path, capsys):
    net = tmp_path / "net.json"
    assert main(["build-approx", "--fn", "abs", "--eps", "0.2", "--emit", str(net)]) == 0
    capsys.readouterr()
    assert main(["certify", "--net", str(net), "--alpha", "0.5", "--pairs", "10000", "--seed", "7"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["hoelder"]["value"] <= 1.2 and out["lipschitz"]["method"] == "breakpoint_exact"


def test_build_custom_grid(tmp_path, capsys):
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps({"values": [0.0, 0.25, 0.5, 0.25, 0.0]}))
    net = tmp_path / "net.json"
    assert main(["build-approx", "--fn", "custom-grid", "--grid", str(grid), "--L", "1.25", "--B", "0.5",
                 "--eps", "0.2", "--emit", str(net)]) == 0


def test_run_exit_codes(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"gammas": [0.3, 0.5]}))
    out = tmp_path / "r.json"
    assert main(["run", "example1", "--config", str(cfg), "--out", str(out), "--csv", str(tmp_path / "r.csv")]) == 0
    assert json.loads(out.read_text())["passed"]
    cfg.write_text(json.dumps({"gammas": [0.05]}))
    # the stated quadratic bracket with the optimal slope as constant fails here
    assert main(["run", "example1", "--config", str(cfg)]) == 1
