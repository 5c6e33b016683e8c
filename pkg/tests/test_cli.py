import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from lmmstab.cli import main, parse_n_list
from lmmstab.errors import UsageError
from lmmstab.methods import make_method, save_method


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(text.splitlines()))


def test_classify_midpoint(capsys):
    code, out, _ = run(capsys, "classify", "--method", "midpoint")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "WeaklyStable"
    assert doc["roots"] == [[1.0, 0.0], [-1.0, 0.0]]


def test_classify_method_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    save_method(make_method("double", [1, -2, 1], [0, 0, 1]), path)
    code, out, _ = run(capsys, "classify", "--method-file", str(path))
    assert code == 0
    assert json.loads(out)["verdict"] == "RootConditionViolated"
    assert "reason" in json.loads(out)


def test_witness_csv(capsys):
    code, out, err = run(capsys, "witness", "--method", "midpoint", "--n-list", "64,128")
    assert code == 0
    table = rows(out)
    assert table[0] == ["n", "ratio", "image_norm", "u_inf_norm"]
    assert [float(r[1]) for r in table[1:]] == pytest.approx([64, 128], rel=1e-9)
    summary = json.loads(err)
    assert summary["case"] == "real" and summary["monotone"] is True


def test_witness_spijker_construction(capsys):
    code, out, _ = run(capsys, "witness", "--method", "midpoint", "--n-list", "64,128", "--construction", "spijker")
    assert code == 0
    table = rows(out)
    assert [float(r[1]) for r in table[1:]] == pytest.approx([128, 256], rel=1e-12)
    assert [float(r[2]) for r in table[1:]] == pytest.approx([0.5, 0.5], abs=1e-12)


def test_witness_strong_method_is_usage_error(capsys):
    code, _, err = run(capsys, "witness", "--method", "BDF2", "--n-list", "8,16")
    assert code == 1
    assert "WeaklyStable" in err


def test_stability_constant_and_dump(capsys, tmp_path):
    prefix = tmp_path / "mid"
    code, out, _ = run(capsys, "stability-constant", "--method", "midpoint", "--pair", "inf-inf",
                       "--n-list", "4,8", "--dump-matrix", str(prefix))
    assert code == 0
    table = rows(out)
    assert table[0] == ["n", "S_n"]
    assert len(table) == 3
    A = np.loadtxt(tmp_path / "mid_A.csv", delimiter=",")
    B = np.loadtxt(tmp_path / "mid_B.csv", delimiter=",")
    assert A.shape == B.shape == (6, 6)
    assert A[2, 0] == pytest.approx(-0.5 / 0.2)


def test_consistency_json(capsys):
    code, out, _ = run(capsys, "consistency", "--scheme", "alt-euler", "--norm", "spijker", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"] == ["h", "defect_norm"]
    assert doc["summary"]["slope"] == pytest.approx(2.0, abs=0.15)


def test_integrate_to_file(capsys, tmp_path):
    out_path = tmp_path / "run.csv"
    code, out, _ = run(capsys, "integrate", "--method", "BDF2", "--n", "50", "--out", str(out_path))
    assert code == 0 and out == ""
    table = rows(out_path.read_text())
    assert table[0] == ["t", "u", "exact", "error"]
    assert len(table) == 53
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["max_newton_iters"] <= 3


def test_demo_oscillation(capsys):
    code, out, err = run(capsys, "demo-oscillation", "--method", "midpoint")
    assert code == 0
    summary = json.loads(err)
    assert summary["h"] == pytest.approx(0.05)
    assert summary["parasitic_amplitude"] >= 1e-2


def test_reproduce(capsys):
    code, out, _ = run(capsys, "reproduce")
    assert code == 0
    doc = json.loads(out)
    assert doc["theorem1"]["image_norm"] == pytest.approx(0.5, abs=1e-12)
    assert doc["theorem1"]["image_norm_is_half"] and doc["theorem1"]["u_norm_equals_n"]
    assert set(doc["theorem2"]) == {"midpoint", "milne"}
    assert all(v["monotone"] for v in doc["theorem2"].values())
    assert all(v["witness_below_oracle"] for v in doc["theorem2"].values())
    assert max(doc["factorization_relative_residual"].values()) <= 1e-10


@pytest.mark.parametrize("argv", [
    ["witness", "--method", "midpoint", "--n-list", "128,64"],
    ["witness", "--method", "midpoint", "--n-list", "a,b"],
    ["classify", "--method", "rk4"],
    ["classify"],
    ["stability-constant", "--method", "midpoint", "--pair", "l2"],
    ["consistency", "--scheme", "euler", "--norm", "l1"],
    ["integrate", "--method", "euler", "--problem", "nope"],
    ["integrate", "--method", "euler", "--start", "guess"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err


def test_size_cap_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("LMM_DENSE_CAP", "20")
    code, _, err = run(capsys, "stability-constant", "--method", "euler", "--n-list", "64")
    assert code == 1


def test_numerical_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps({"name": "tiny", "alpha": [2.225073858507e-311, 1.0], "beta": [0.0, 1.0]}))
    code, _, err = run(capsys, "classify", "--method-file", str(path))
    assert code == 2
    assert "numerical failure" in err


@pytest.mark.parametrize("argv", [
    ["reproduce", "--seed", "3"],
    ["witness", "--method", "milne", "--n-list", "16,32"],
    ["stability-constant", "--method", "BDF2", "--n-list", "8,16"],
])
def test_byte_identical_outputs(tmp_path, argv):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_probes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["reproduce", "--seed", "0", "--out", str(a)])
    main(["reproduce", "--seed", "1", "--out", str(b)])
    fa = json.loads(a.read_text())["factorization_relative_residual"]
    fb = json.loads(b.read_text())["factorization_relative_residual"]
    assert fa.keys() == fb.keys()
    assert json.loads(a.read_text())["seed"] == 0


def test_parse_n_list():
    assert parse_n_list("4, 8,16") == [4, 8, 16]
    with pytest.raises(UsageError):
        parse_n_list("")
    with pytest.raises(UsageError):
        parse_n_list("0,4")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lmmstab.cli", "classify", "--method", "BDF2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "StronglyStable"
