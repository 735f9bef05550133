import csv
import json
import subprocess
import sys

import pytest

from wcheb.cli import main

unit = {"type": "interval", "intervals": [[-1, 1]]}


def _run(tmp_path, doc, *flags, name="out.json"):
    src = tmp_path / "problem.json"
    src.write_text(json.dumps(doc))
    out = tmp_path / name
    code = main(["run", str(src), "--out", str(out), *flags])
    return code, out


def test_widom_example(tmp_path):
    code, out = _run(tmp_path, {"command": "widom", "set": unit, "weight": {"type": "constant", "value": 1},
                                "n": 3})
    assert code == 0
    rec = json.loads(out.read_text())["records"][0]
    assert rec["result"]["norm"] == pytest.approx(0.25, rel=1e-10)
    assert rec["widom"]["W_n"] == pytest.approx(2, rel=1e-9)
    assert rec["certificate"]["kind"] == "rivlin_shapiro"
    assert rec["alternation"]["signs"] == [-1, 1, -1, 1]


def test_sharpness_csv(tmp_path):
    code, out = _run(tmp_path, {"command": "sharpness", "n": 2, "eps": [0.3, 0.1, 0.03, 0.01]},
                     "--format", "csv")
    assert code == 0
    with open(out.with_suffix(".csv"), newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert float(rows[-1]["ratio"]) <= 1.03


def test_malformed_set_exit_2(tmp_path, capsys):
    bad = {"type": "interval", "intervals": [[-1, 0.5], [0, 1]]}
    code, out = _run(tmp_path, {"command": "solve", "set": bad, "n": 2})
    assert code == 2 and not out.exists()
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["reason"] == "schema_error"


def test_schema_type_error_exit_2(tmp_path):
    code, out = _run(tmp_path, {"command": "solve", "set": unit, "n": -1})
    assert code == 2 and not out.exists()
    code, out = _run(tmp_path, {"command": "frobnicate", "set": unit, "n": 1})
    assert code == 2 and not out.exists()


def test_reproducible_bytes(tmp_path):
    doc = {"command": "solve", "set": {"type": "circle", "center": 0, "radius": 1},
           "weight": {"type": "abs_poly_power", "factors": [{"p": [2, 0.5], "alpha": 1}]}, "n": 2,
           "options": {"seed": 3}}
    _, a = _run(tmp_path, doc, "--reproducible", name="a.json")
    _, b = _run(tmp_path, doc, "--reproducible", name="b.json")
    assert a.read_bytes() == b.read_bytes()
    assert "wall_clock" not in json.loads(a.read_text())


def test_certify_round_trip(tmp_path):
    code, out = _run(tmp_path, {"command": "solve", "set": unit, "n": 4}, name="solved.json")
    assert code == 0
    stored = json.loads(out.read_text())
    code, out2 = _run(tmp_path, {"command": "certify", "set": unit, "result": stored}, name="cert.json")
    assert code == 0
    rec = json.loads(out2.read_text())["records"][0]
    assert rec["certificate"]["kind"] == "rivlin_shapiro"
    assert rec["certificate"]["residual"] <= 1e-8


def test_preimage_command(tmp_path):
    code, out = _run(tmp_path, {"command": "preimage", "set": unit, "p": [-2, 0, 1], "n": 2})
    assert code == 0
    rec = json.loads(out.read_text())["records"][0]
    assert rec["widom"]["W_n"] == pytest.approx(rec["widom_base"]["W_n"], abs=1e-9)


def test_bounds_command(tmp_path):
    doc = {"command": "bounds", "set": {"type": "circle"}, "n": 2, "z": [2, [0, 3]]}
    code, out = _run(tmp_path, doc)
    assert code == 0
    reps = json.loads(out.read_text())["records"][0]["bounds"]
    assert all(r["passed"] for r in reps)


def test_capacity_estimate_flag(tmp_path):
    doc = {"command": "capacity", "set": {"type": "interval", "intervals": [[-2, -1], [0.5, 2]]}}
    code, out = _run(tmp_path, doc)
    assert code == 0
    assert json.loads(out.read_text())["records"][0]["kind"] == "leja-estimate"


def test_nonconvergence_exit_3(tmp_path):
    doc = {"command": "solve", "set": {"type": "circle"},
           "weight": {"type": "abs_poly_power", "factors": [{"p": [2, 0.5], "alpha": 1}]}, "n": 3,
           "options": {"max_iter": 3}}
    code, out = _run(tmp_path, doc)
    assert code == 3
    assert json.loads(out.read_text())["status"]["reason"] == "non_convergence"


def test_module_entry_point(tmp_path):
    src = tmp_path / "p.json"
    src.write_text(json.dumps({"command": "capacity", "set": unit}))
    out = tmp_path / "o.json"
    proc = subprocess.run([sys.executable, "-m", "wcheb", "run", str(src), "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["records"][0]["capacity"] == 0.5
