import json
import subprocess
import sys

import pytest

from knotchar.cli import main


def run_json(capsys, *argv):
    code = main([*argv, "--json", "-"])
    return code, json.loads(capsys.readouterr().out)


def test_norm_one_zero(capsys):
    code, doc = run_json(capsys, "norm", "1", "0", "--knot", "fig8")
    assert code == 0 and doc["result"]["norm"] == 4
    assert doc["schema"] == 1 and doc["preset"] == "fig8" and doc["seed"] == 0
    assert {"version", "tolerances"} <= set(doc)


def test_norm_zero_one_text(capsys):
    assert main(["norm", "0", "1"]) == 0
    assert "16" in capsys.readouterr().out


def test_surgery_three_one(capsys):
    code, doc = run_json(capsys, "surgery", "3", "1")
    assert code == 0
    xs = {c["x"] for c in doc["result"]["chi"] if c["trace_gamma"] == 2 and not c["excluded"]}
    assert xs == {"1", "1 + sqrt(2)", "1 - sqrt(2)"}


def test_charvar_restrict_apoly(capsys):
    assert main(["charvar"]) == 0
    assert "x^2*z - 2*x^2 - z^2 + z + 1" in capsys.readouterr().out
    assert main(["restrict"]) == 0
    assert "x^4 - 5*x^2 + 2" in capsys.readouterr().out
    assert main(["apoly"]) == 0
    assert "m^8*l - m^6*l - m^4*l^2 - 2*m^4*l - m^4 - m^2*l + l" in capsys.readouterr().out


def test_tame_at_point(capsys):
    code, doc = run_json(capsys, "tame", "l", "m + 2", "--at", "0,0")
    assert code == 0
    [row] = doc["result"]["branches"]
    assert row["tame"] == [0.0625, 0.0]


def test_volcs_driver_and_csv(capsys, tmp_path):
    csv = tmp_path / "samples.csv"
    code, doc = run_json(capsys, "volcs", "--driver", "circle(1.0, 0.1)", "--csv", str(csv))
    assert code == 0
    assert csv.read_text().startswith("path,t,re_m,im_m")
    assert "result" in doc


def test_deterministic_json(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(["surgery", "0", "1", "--seed", "3", "--json", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_input_errors(capsys, tmp_path):
    assert main(["norm", "1", "0", "--knot", "no-such-knot"]) == 3
    err = json.loads(capsys.readouterr().err)
    assert err["exit"] == 3 and err["error"]["type"] == "PresetError"
    assert main(["volcs", "--driver", "circle(0, 0.0)"]) == 3
    assert main(["norm", "1", "0", "--tol", "-1"]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["norm", "1"])
    assert exc.value.code == 3
    out = tmp_path / "err.json"
    assert main(["tame", "x^", "l", "--json", str(out)]) == 3
    assert json.loads(out.read_text())["exit"] == 3


def test_numeric_failure_exit_code(capsys):
    # the lasso segment runs through m = (1 + sqrt 5)/2, over a reducible character
    assert main(["volcs", "--driver", "segment(2, 0.3)"]) == 4
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "PathError"


def test_version_flag():
    out = subprocess.run([sys.executable, "-m", "knotchar.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "knotchar" in out.stdout


@pytest.mark.slow
def test_verify_exit_zero(capsys):
    code, doc = run_json(capsys, "verify", "--knot", "fig8")
    assert code == 0
    assert [c["status"] for c in doc["result"]["checks"]] == ["PASS"] * 11


def test_verify_failure_exit_code(monkeypatch, capsys):
    from knotchar import verify

    def broken(knot, tol):
        return verify.Check(1, "always fails", False, "forced")

    def crashes(knot, tol):
        raise RuntimeError("boom")

    monkeypatch.setattr(verify, "CHECKS", [broken, crashes])
    code, doc = run_json(capsys, "verify")
    assert code == 2
    assert [c["status"] for c in doc["result"]["checks"]] == ["FAIL", "FAIL"]
    assert "RuntimeError: boom" in doc["result"]["checks"][1]["detail"]
