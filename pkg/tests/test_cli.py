import csv
import io
import json
import subprocess
import sys

import pytest

from g2lab.cli import main
from g2lab.report import TORSION_COLUMNS, validate_report
from g2lab.verify import CHECKS

FAILING_AS_STATED = {"g2sphere.dphi_oracle", "g2sphere.tau0_general",
                     "g2sphere.constant_curvature_torsion", "g2sphere.s4_identity"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--metric", "sphere4", "--samples", "3")
    rep = json.loads(out)
    validate_report(rep)
    assert rep["metric"] == "sphere4" and rep["config"]["seed"] == 0
    assert {c["id"] for c in rep["checks"]} == set(CHECKS) - {"g2sphere.levi_civita_flat"}
    failed = {c["id"] for c in rep["checks"] if not c["passed"]}
    assert failed == FAILING_AS_STATED
    assert code == 1 and rep["passed"] is False
    assert any("mu^alpha1" in n for n in rep["notes"])


def test_torsion_csv(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "torsion", "--metric", "hyperbolic4", "--samples", "4",
                       "--format", "csv", "--out", str(path))
    assert out == ""
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert tuple(rows[0]) == TORSION_COLUMNS
    assert len(rows) == 5 and all(len(r) == 8 for r in rows)
    # corrected tau0 on H^4 is 6/7
    assert all(abs(float(r[3]) - 6 / 7) < 1e-6 for r in rows[1:])


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "--metric", "cp2", "--samples", "2", "--format", "text")
    assert "PASS" in out and "FAIL" in out and "OVERALL" in out
    for spec in CHECKS.values():
        if spec.scope == "global":
            assert spec.anchor in out


def test_s2xs2_negative_control(capsys):
    _, out, _ = run(capsys, "verify", "--metric", "s2xs2", "--samples", "3")
    checks = {c["id"]: c for c in json.loads(out)["checks"]}
    for key in ("riemann4.einstein", "g2sphere.cocalibrated"):
        assert checks[key]["expect"] == "violation"
        assert checks[key]["passed"] and checks[key]["max_residual"] > 0.1
    _, out, _ = run(capsys, "verify", "--metric", "s2xs2", "--r1", "1.5", "--r2", "1.5",
                    "--samples", "2")
    checks = {c["id"]: c for c in json.loads(out)["checks"]}
    assert checks["g2sphere.cocalibrated"]["expect"] == "hold"
    assert checks["g2sphere.cocalibrated"]["passed"]


def test_deterministic_bytes(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("G2LAB_THREADS", "1")
    run(capsys, "torsion", "--metric", "cp2", "--samples", "4", "--seed", "5",
        "--out", str(tmp_path / "a.json"))
    monkeypatch.setenv("G2LAB_THREADS", "3")
    run(capsys, "torsion", "--metric", "cp2", "--samples", "4", "--seed", "5",
        "--out", str(tmp_path / "b.json"))
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    run(capsys, "torsion", "--metric", "cp2", "--samples", "4", "--seed", "6",
        "--out", str(tmp_path / "c.json"))
    assert (tmp_path / "a.json").read_bytes() != (tmp_path / "c.json").read_bytes()


def test_tolerance_override(capsys):
    _, out, _ = run(capsys, "verify", "--metric", "flat", "--samples", "2",
                    "--tol", "g2sphere.dphi_oracle=3")
    checks = {c["id"]: c for c in json.loads(out)["checks"]}
    assert checks["g2sphere.dphi_oracle"]["tolerance"] == 3.0
    assert checks["g2sphere.dphi_oracle"]["passed"]


@pytest.mark.parametrize("argv", [
    ["verify", "--tol", "nope=1"],
    ["verify", "--tol", "g2sphere.dmu"],
    ["verify", "--samples", "0"],
    ["verify", "--fd-step", "0.1"],
    ["verify", "--metric", "torus"],
    ["verify", "--metric", "flat", "--config", "x.toml"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_bad_config_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('[metric]\ng11 = "1 +"\ng22 = "1"\ng33 = "1"\ng44 = "1"\n')
    code, _, err = run(capsys, "verify", "--config", str(bad), "--samples", "1")
    assert code == 2 and "parse error" in err
    neg = tmp_path / "neg.toml"
    neg.write_text('[metric]\ng11 = "1"\ng22 = "1"\ng33 = "1"\ng44 = "-1"\n')
    code, _, err = run(capsys, "verify", "--config", str(neg), "--samples", "1")
    assert code == 2 and "positive definite" in err
    code, _, err = run(capsys, "verify", "--config", str(tmp_path / "missing.toml"))
    assert code == 2


def test_custom_config_runs(tmp_path, capsys):
    cfg = tmp_path / "conf.toml"
    cfg.write_text("""
[metric]
g11 = "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2"
g22 = "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2"
g33 = "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2"
g44 = "4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2"

[options]
name = "round"
""")
    code, out, _ = run(capsys, "torsion", "--config", str(cfg), "--samples", "2")
    rep = json.loads(out)
    assert rep["metric"] == "round"
    assert all(abs(t["tau0"] - 18 / 7) < 1e-6 for t in rep["torsion"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "g2lab", "--version"], capture_output=True,
                          text=True, check=True)
    assert proc.stdout.startswith("g2lab ")
