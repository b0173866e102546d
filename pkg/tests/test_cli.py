import csv
import io
import json
import subprocess
import sys

import pytest

from taulab import cli


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_psi_csv(capsys):
    code, out, _ = run(["psi", "--limit", "10", "--format", "csv"], capsys)
    assert code == 0
    assert out.endswith("\r\n")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["v", "psi", "pi", "psi_over_v"]
    assert rows[1][1].startswith("7.8320141")
    assert len(rows[1][1].replace(".", "")) == 17


def test_contour_verify_json(capsys):
    code, out, _ = run(["contour-verify", "--signal", "exp_decay", "--alpha", "1", "--R", "1", "--T", "5",
                        "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"command", "params", "rows", "summary"}
    assert doc["command"] == "contour-verify"
    assert doc["rows"][0]["residual"] < 1e-8


def test_fatou(capsys):
    code, out, _ = run(["fatou", "--series", "geometric_log", "--N", "100"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["rows"][0]["deviation"] < 1e-12
    assert abs(doc["rows"][0]["partial"] - 0.6931472) < 1e-7


def test_validation_exit_codes(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["psi", "--limit", "-3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["contour-verify", "--signal", "nonsense"])
    assert exc.value.code == 2
    code, out, err = run(["contour-verify", "--signal", "sinc", "--R", "1.5"], capsys)
    assert code == 2 and out == "" and "WindowError" in err


def test_nonconvergence_exit_code(capsys, monkeypatch):
    from taulab.quadrature import QuadResult

    monkeypatch.setattr(cli.fourier, "modulated_pair", lambda F, phi, T: QuadResult(0j, 1.0, False))
    code, out, _ = run(["rl-decay", "--T", "5"], capsys)
    assert code == 3 and json.loads(out)["summary"]["converged"] is False


def test_deterministic(capsys):
    args = ["bound-check", "--count", "20", "--seed", "4", "--format", "csv"]
    _, a, _ = run(args, capsys)
    _, b, _ = run(args, capsys)
    assert a == b and a.count("\r\n") == 41


def test_complex_split_and_nan(capsys):
    code, out, _ = run(["tauber-sweep", "--signal", "sine", "--B", "2", "--R", "1", "--T", "10,100", "--format", "json"],
                       capsys)
    doc = json.loads(out)
    row = doc["rows"][0]
    assert "partial_re" in row and "partial_im" in row and row["rhs_full"] is None
    assert doc["summary"]["applicable"] is False


def test_cache_env(tmp_path, monkeypatch, capsys):
    path = tmp_path / "cache.bin"
    monkeypatch.setenv("TAULAB_CACHE", str(path))
    code, out, _ = run(["psi", "--limit", "1000", "--cache-path", str(tmp_path / "ignored.bin")], capsys)
    assert code == 0 and path.exists() and not (tmp_path / "ignored.bin").exists()
    assert path.read_bytes()[:8] == b"TAULAB01"


@pytest.mark.parametrize("args", [
    ["zeta-eval", "--w", "2", "0.5+14j"],
    ["rl-decay", "--model", "heaviside", "--T", "500"],
    ["boundary-pair", "--signal", "exp_decay", "--T", "10", "--eps", "0.01"],
    ["tauber-sweep"],
    ["fatou", "--series", "harmonic", "--N", "100,1000"],
])
def test_commands_run(args, capsys):
    code, out, _ = run(args + ["--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["rows"]


@pytest.mark.slow
def test_pnt_and_ikehara_commands(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TAULAB_CACHE", str(tmp_path / "c.bin"))
    code, out, _ = run(["pnt-report", "--vmax", "1e6"], capsys)
    s = json.loads(out)["summary"]
    assert code == 0 and s["psi_deviation"] < 0.01 and s["integral_deviation"] < 0.05
    code, out, _ = run(["ikehara"], capsys)
    s = json.loads(out)["summary"]
    assert code == 0 and s["bounded"] and s["label"] == "empirical"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "taulab", "psi", "--limit", "10", "--format", "csv"],
                         capture_output=True, text=True, check=True)
    assert "7.8320141" in out.stdout
