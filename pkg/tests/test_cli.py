from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from kwradial import cli


def _run(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), buf)
    return code, buf.getvalue()


def test_verify_f1_ok():
    code, out = _run("verify", "--family", "f1", "--C", "1", "--count", "200")
    assert code == 0
    assert out.startswith("#")


def test_verify_f1_zero_C():
    code, _ = _run("verify", "--family", "f1", "--C", "0", "--count", "50", "--fd-points", "0")
    assert code == 0


def test_verify_tan_fails_tolerance():
    code, _ = _run("verify", "--family", "tan", "--C", "1", "--count", "50")
    assert code == 2


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        cli.run(["verify", "--family", "nope"], io.StringIO())
    assert exc.value.code == 1
    code, _ = _run("bubbling", "--C", "-1")
    assert code == 1


def test_missing_centers_file(tmp_path):
    code, _ = _run("multicenter", "--centers", str(tmp_path / "missing.json"))
    assert code == 3


def test_deterministic_output():
    args = ("verify", "--family", "glued_plus", "--C", "2", "--count", "100", "--seed", "5")
    a = _run(*args)
    b = _run(*args)
    assert a == b


def test_instanton_glued():
    code, out = _run("instanton", "--family", "glued_plus", "--C", "1")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    header, row = lines[0].split(","), lines[1].split(",")
    assert float(row[header.index("k_boundary")]) == -1.0


def test_bubbling_concentrates():
    code, out = _run("bubbling", "--C", "10000", "--r", "1", "--min-fraction", "0.99", "--count", "50")
    assert code == 0


def test_nahm_json():
    code, out = _run("nahm", "--which", "plus_half", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["meta"]["which"] == "plus_half"
    assert abs(d["meta"]["y_p_at_1e_3"] - 1.0) < 5e-3


def test_multicenter_single_centre(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"lambdas": [1.0], "centers": [[0, 0, 0, 0]], "C": 1.0}))
    code, out = _run("multicenter", "--centers", str(path), "--count", "6")
    assert code == 0
    out_path = tmp_path / "out.csv"
    code, _ = _run("multicenter", "--centers", str(path), "--count", "6", "--out", str(out_path))
    assert code == 0 and out_path.read_text() == out


def test_odeplot_phase():
    code, out = _run("odeplot", "--family", "f1", "--phase")
    assert code == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kwradial.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
