import csv
import io
import json
import subprocess
import sys

import pytest

from quadspec.cli import main

HYD = ["--param", "m=0", "--param", "s=0", "--param", "c1=0", "--param", "c2=0"]


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "quadspec", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_spectrum_json_hydrogen():
    code, out, _ = run("spectrum", "--system", "micz3d", *HYD, "--p-max", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "specgen/1"
    assert [r["E"] for r in doc["rows"]] == pytest.approx([-0.5, -0.125, -1 / 18], abs=1e-12)


def test_spectrum_from_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"system": "osc4d", "parameters": {"m": 0, "s": 0, "c1": 0, "c2": 0, "omega": 1},
                               "p_max": 1}))
    code, out, _ = run("spectrum", "--config", str(cfg))
    assert code == 0
    assert [r["E"] for r in json.loads(out)["rows"]] == pytest.approx([2, 4])


def test_missing_omega_exit_3(capsys):
    code = main(["spectrum", "--system", "osc4d", *HYD])
    assert code == 3
    assert "missing central charge: omega" in capsys.readouterr().err


def test_critical_coupling_exit_3(capsys):
    code = main(["spectrum", "--system", "micz3d", "--param", "m=0", "--param", "s=1",
                 "--param", "c1=-0.25", "--param", "c2=0"])
    assert code == 3


def test_unknown_system_exit_3():
    assert main(["spectrum", "--system", "kepler", "--param", "m=0"]) == 3


def test_csv_and_json_agree(capsys):
    args = ["spectrum", "--system", "micz3d", "--param", "m=1", "--param", "s=0.5", "--param", "c1=0.2",
            "--param", "c2=0.1", "--p-max", "3"]
    main(args + ["--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    main(args + ["--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == len(doc["rows"])
    for a, b in zip(rows, doc["rows"]):
        assert float(a["E"]) == b["E"] and float(a["u"]) == b["u"] and int(a["p"]) == b["p"]
        assert int(a["n_discrepancies"]) == len(b["discrepancies"])


def test_output_file_and_determinism(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"o{k}.json"
        assert main(["spectrum", "--system", "miczs3", "--param", "m=0.5", "--param", "mu=1",
                     "--param", "alpha=1", "--param", "R=2", "--p-max", "2", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_hydrogen_exit_0():
    code, out, _ = run("verify", "--system", "micz3d", *HYD, "--p-max", "5")
    assert code == 0
    assert json.loads(out)["oracle"]["max_residual"] < 1e-8


def test_verify_p0_and_table_format(capsys):
    assert main(["verify", "--system", "miczs3", "--param", "m=0", "--param", "mu=0", "--param", "alpha=1",
                 "--param", "R=1", "--p-max", "0", "--format", "table"]) == 0
    assert "verify" in capsys.readouterr().out


def test_reconcile_self_test(capsys):
    assert main(["reconcile", "--self-test"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rows"][0]["constant"] == pytest.approx(2)


def test_reconcile_single_system(capsys):
    assert main(["reconcile", "--system", "osc4d", *HYD, "--param", "omega=1", "--p-max", "1"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert {r["reading"] for r in rows} == {"A", "B"}


def test_duality_exit_codes(capsys):
    assert main(["duality", "--p-max", "5", "--grid", "10"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["oracle"]["max_residual"] < 1e-14
    assert main(["duality", "--p-max", "0", "--grid", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["oracle"]["points"] == 1
    assert main(["duality", "--p-max", "0", "--grid", "0"]) == 3


def test_spectrum_exit_2_when_a_level_is_missing(monkeypatch, capsys):
    import quadspec.cli as cli

    real = cli.spectrum_table
    monkeypatch.setattr(cli, "spectrum_table", lambda *a, **k: [r for r in real(*a, **k) if r.p != 1])
    assert main(["spectrum", "--system", "micz3d", *HYD, "--p-max", "2"]) == 2
    assert json.loads(capsys.readouterr().out)["oracle"]["p_without_representation"] == [1]
