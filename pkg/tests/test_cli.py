import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from aluthge_lab.cli import ExperimentConfig, main, run
from aluthge_lab.exceptions import ConfigError
from aluthge_lab.matrix_io import matrix_from_dict, write_matrix


@pytest.fixture
def tfile(tmp_path):
    path = tmp_path / "t.json"
    write_matrix(path, np.array([[0, 1], [2, 0]]))
    return path


def test_transform(tmp_path, tfile):
    out = tmp_path / "d.json"
    assert main(["transform", "--matrix", str(tfile), "--mean", "geometric:0.5", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == 1
    assert report["residuals"]["closed_form"] <= 1e-9
    r2 = np.sqrt(2)
    assert np.allclose(matrix_from_dict(report["delta"]), [[0, r2], [r2, 0]])
    assert "timestamp" not in json.dumps(report)


def test_transform_quadrature(tmp_path, tfile):
    out = tmp_path / "d.json"
    assert main(["transform", "--matrix", str(tfile), "--mean", "harmonic:0.5", "--oracle", "quadrature", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["residuals"]["quadrature"] <= 1e-5


def test_malformed_matrix(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rows": 2, "cols": 2, "entrys": []}))
    assert main(["transform", "--matrix", str(bad)]) == 1
    assert "entries" in capsys.readouterr().err


def test_missing_file_and_usage(tmp_path):
    assert main(["transform", "--matrix", str(tmp_path / "nope.json")]) == 1
    with pytest.raises(SystemExit) as info:
        main(["transform"])
    assert info.value.code == 1


def test_iterate_trace(tmp_path, tfile):
    trace = tmp_path / "trace.csv"
    assert main(["iterate", "--matrix", str(tfile), "--emit-trace", str(trace), "--out", str(tmp_path / "i.json")]) == 0
    rows = list(csv.DictReader(trace.open()))
    assert list(rows[0]) == ["step", "stepDelta", "defect", "traceRe", "traceIm"]
    assert float(rows[-1]["stepDelta"]) <= 1e-10 * 2
    assert abs(float(rows[0]["traceRe"])) < 1e-12


def test_shift_sim(tmp_path):
    out = tmp_path / "osc.csv"
    assert main(["shift-sim", "--a", "1", "--b", "2", "--lambda", "0.5", "--levels", "4", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["n", "gamma0", "lower", "upper", "blockTarget"]
    for r in rows:
        assert float(r["lower"]) <= float(r["gamma0"]) * (1 + 1e-12) <= float(r["upper"]) * (1 + 2e-12)


def test_numrange(tmp_path, tfile):
    out = tmp_path / "r.json"
    code = main(["numrange", "--matrix", str(tfile), "--means", "harmonic:0.5,geometric:0.5", "--angles", "90", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["labels"] == ["T", "harmonic:0.5", "geometric:0.5"]
    assert len(report["boundaries"]["T"]["points"]) == 90
    assert report["inclusion"][1][2]


def test_dominance(tmp_path):
    out = tmp_path / "d.json"
    assert main(["dominance", "--means", "arithmetic:0.5,harmonic:0.5", "--s", "1,2,5", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["dominated"] is False


def test_verify_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--suite", "shift", "--seed", "42", "--out", str(a)]) == 0
    assert main(["verify", "--suite", "shift", "--seed", "42", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_property_violation_exit_code(tfile, capsys):
    cfg = ExperimentConfig("transform", paths={"matrix": str(tfile)}, tolerances={"trace": -1.0})
    assert run(cfg) == 2
    assert "trace" in capsys.readouterr().err


def test_config_rejects_unknown_keys(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"command": "verify", "colour": 1})
    with pytest.raises(ConfigError):
        ExperimentConfig("verify", options={"suit": "all"})
    with pytest.raises(ConfigError):
        ExperimentConfig("launch")
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "verify", "seed": 1, "extra": True}))
    assert main(["run", str(cfg)]) == 1


def test_run_config(tmp_path):
    cfg = tmp_path / "c.json"
    out = tmp_path / "v.json"
    cfg.write_text(json.dumps({"command": "verify", "seed": 42, "options": {"suite": "dominance"}, "paths": {"out": str(out)}}))
    assert main(["run", str(cfg)]) == 0
    assert json.loads(out.read_text())["passed"]


def test_corpus(tmp_path):
    assert main(["corpus", "--kind", "normal", "--m", "3", "--count", "2", "--seed", "5", "--out-dir", str(tmp_path / "c")]) == 0
    assert len(list((tmp_path / "c").glob("*.json"))) == 2


def test_module_entry_point(tfile):
    proc = subprocess.run(
        [sys.executable, "-m", "aluthge_lab", "transform", "--matrix", str(tfile), "--mean", "arithmetic:0.5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "transform"
