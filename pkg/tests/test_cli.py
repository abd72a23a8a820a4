import json
from pathlib import Path

import pytest

from hgperiod.cli import main
from hgperiod.io import load_document

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def test_verify_three_points(capsys):
    code, out = run(capsys, "verify", FIX / "three_points.json", "--tol", "1e-6")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and "lhs" in rep and "rhs" in rep


def test_verify_two_points_with_f0(capsys):
    code, out = run(capsys, "verify", FIX / "two_points_exp.json", "--with-f0", "--convergence")
    rep = json.loads(out)
    assert code == 0 and rep["convergence"]["monotone"]


def test_failing_check_exits_one(capsys):
    code, _ = run(capsys, "verify", FIX / "three_points.json", "--tol", "1e-300")
    assert code == 1


def test_bad_rational_exits_two(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"dimension": 1, "hyperplanes": [{"coeffs": ["1/0"], "weight": {"re": 1}}]}))
    code, out = run(capsys, "verify", p)
    assert code == 2 and json.loads(out)["error"] == "SchemaError"


def test_module_error_exits_three(tmp_path, capsys):
    p = tmp_path / "pole.json"
    p.write_text(json.dumps({"dimension": 1, "hyperplanes": [
        {"coeffs": ["1"], "weight": {"re": -1}}, {"coeffs": ["1"], "const": "-1", "weight": {"re": 0.5}}]}))
    code, out = run(capsys, "beta", p)
    assert code == 3 and json.loads(out)["error"] == "GammaPole"


def test_env_tolerance(monkeypatch, capsys):
    monkeypatch.setenv("HGPERIOD_TOL", "1e-300")
    code, _ = run(capsys, "verify", FIX / "three_points.json")
    assert code == 1


@pytest.mark.parametrize("name,extra", [("two_points_exp.json", ["--with-f0"]), ("three_points.json", [])])
def test_analyze_round_trip(name, extra, tmp_path, capsys):
    code, out = run(capsys, "analyze", FIX / name, *extra)
    rep = json.loads(out)
    assert code == 0
    p = tmp_path / "again.json"
    p.write_text(json.dumps(rep["fixture"]))
    code2, out2 = run(capsys, "analyze", p, *extra)
    assert code2 == 0 and json.loads(out2) == rep


@pytest.mark.parametrize("cmd", ["beta", "critical", "period-matrix"])
def test_other_subcommands(cmd, capsys):
    code, out = run(capsys, cmd, FIX / "two_points_exp.json", "--with-f0", "--format", "table")
    assert code == 0 and out.strip()


def test_selberg_verify(capsys):
    code, out = run(capsys, "selberg-verify", "--n", 1, "--z", "0,1", "--alpha", "0.6,0.8",
                    "--gamma", 0.3, "--a", 1, "--variant", "exp")
    assert code == 0 and json.loads(out)["passed"]
    code, _ = run(capsys, "selberg-verify", "--n", 1, "--z", "0,1,3", "--alpha", "0.6,0.8,1.1",
                  "--gamma", 0.3, "--a", 1, "--variant", "critical-exp", "--without-point-product")
    assert code == 1


def _strip_time(rep):
    rep.pop("seconds", None)
    return rep


def test_random_suite_deterministic_and_dumps(tmp_path, capsys):
    args = ["random-suite", "--seed", 11, "--n1", 3, "--n2", 1]
    c1, o1 = run(capsys, *args)
    c2, o2 = run(capsys, *args)
    assert c1 == c2 == 0
    assert _strip_time(json.loads(o1)) == _strip_time(json.loads(o2))
    code, out = run(capsys, *args, "--tol1", "1e-300", "--dump-dir", tmp_path)
    rep = json.loads(out)
    assert code == 1 and rep["seed"] == 11
    dumped = sorted(tmp_path.glob("*.json"))
    assert len(dumped) == 3
    load_document(json.loads(dumped[0].read_text()))


def test_missing_f0_is_input_error(capsys):
    code, _ = run(capsys, "verify", FIX / "three_points.json", "--with-f0")
    assert code == 2
