import json
import math

import numpy as np
import pytest

from nonrecip.cli import main
from nonrecip.experiments import OUTDIR_ENV


def test_presets_output(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert "kappa/2pi = 50 MHz" in out
    assert "gamma/2pi = 10 kHz" in out
    assert "gamma_phi/2pi = 30 kHz" in out
    assert "(0.707, 0.707)" in out and "(0.500, 50.002)" in out
    assert "(0.084, 0.084)" in out and "(0.071, 0.707)" in out
    assert "omega_d/2pi = (500, 900) MHz" in out
    assert "lambda/2pi = (12.5, 12.5) MHz" in out
    assert "lambda/2pi = (44, 87) MHz" in out


def test_selftest_passes(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTDIR_ENV, str(tmp_path))
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out


def test_isolation_map_cli(tmp_path):
    assert main(["isolation-map", "--n", "21", "--out", str(tmp_path)]) == 0
    body = (tmp_path / "isolation_map.csv").read_text().splitlines()
    assert len(body) == 22  # header + 21 rows


def test_dynamics_cli_flags_and_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTDIR_ENV, str(tmp_path))
    assert main(["dynamics", "--preset", "SetI", "--initial", "ge",
                 "--tmax", "5", "--name", "envrun"]) == 0
    assert (tmp_path / "envrun.csv").exists()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"preset": "SetI", "tmax": 5.0, "initial": "eg"}))
    out = tmp_path / "out"
    assert main(["dynamics", "--config", str(cfg), "--initial", "ge",
                 "--out", str(out), "--name", "merged"]) == 0
    meta = json.loads((out / "merged.json").read_text())
    assert meta["scenario"]["initial"] == "ge"  # flag wins
    assert meta["scenario"]["tmax"] == 5.0  # config wins over default


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"presett": "SetI"}))
    with pytest.raises(SystemExit):
        main(["dynamics", "--config", str(cfg), "--out", str(tmp_path)])


def test_detuning_cli(tmp_path):
    assert main(["detuning", "--preset", "SetI", "--initial", "ge", "--tmax", "5",
                 "--qubit-detuning", "0.1", "--out", str(tmp_path), "--name", "det"]) == 0
    meta = json.loads((tmp_path / "det.json").read_text())
    assert meta["scenario"]["qubit_detuning"] == 0.1


def test_decoherence_cli(tmp_path):
    assert main(["decoherence", "--preset", "SetI", "--initial", "eg", "--tmax", "5",
                 "--out", str(tmp_path), "--name", "dec"]) == 0
    meta = json.loads((tmp_path / "dec.json").read_text())
    assert meta["scenario"]["decoherence"] == [1e-3, 3e-3]
    assert meta["params"]["gamma"] == 1e-3


def test_concurrence_cli_writes_c_column(tmp_path):
    assert main(["concurrence", "--preset", "SetI", "--dphi", "0.0", "--initial",
                 "eg", "--tmax", "5", "--out", str(tmp_path), "--name", "con"]) == 0
    header = (tmp_path / "con.csv").read_text().splitlines()[0]
    assert header.endswith(",C")
