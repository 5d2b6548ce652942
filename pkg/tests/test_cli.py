import csv
import io
import json
import os
import subprocess
import sys

import pytest

from archimax.cli import ConfigError, parse_config, run

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def cfg(name):
    return os.path.join(CONFIGS, name)


def test_eval_to_stdout(capsys):
    assert run(["eval", "--config", cfg("exp_independence.json"), "--x", "0.3", "--y", "0.7"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["cdf"] == pytest.approx(0.21)
    assert out["in_support_envelope"] is True


def test_fraction_arguments(capsys):
    assert run(["eval", "--config", cfg("mixed_pair.json"), "--x", "1/2", "--y", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["cdf"] == pytest.approx(0.5)


def test_invalid_config_exit_code(capsys):
    assert run(["masses", "--config", cfg("invalid_pickands.json")]) == 2
    err = capsys.readouterr().err
    assert "mean" in err


def test_missing_config_file(tmp_path, capsys):
    assert run(["masses", "--config", str(tmp_path / "absent.json")]) == 2


def test_parse_config_rejects_bad_fields():
    with pytest.raises(ConfigError):
        parse_config({"version": 2, "williamson": {"builtin": "exp"}, "pickands": {"builtin": "independence"}})
    with pytest.raises(ConfigError):
        parse_config({"version": 1, "williamson": {"builtin": "exp"}, "pickands": {"builtin": "nope"}})
    with pytest.raises(ConfigError):
        parse_config({"version": 1, "williamson": {"atoms": [{"at": 1, "mass": 1, "extra": 0}]},
                      "pickands": {"builtin": "independence"}})


def test_sample_csv_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(["sample", "--config", cfg("mixed_pair.json"), "--n", "500", "--seed", "4", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.reader(io.StringIO(a.read_text())))
    assert rows[0] == ["x", "y"] and len(rows) == 501
    # no temporary files left behind by the atomic write
    assert sorted(os.listdir(tmp_path)) == ["a.csv", "b.csv"]


def test_kendall_csv_has_jump_rows(tmp_path):
    out = tmp_path / "k.csv"
    assert run(["kendall", "--config", cfg("mixed_pair.json"), "--grid", "16", "--out", str(out)]) == 0
    rows = [(float(t), float(f)) for t, f in list(csv.reader(out.open()))[1:]]
    ts = [t for t, _ in rows]
    at = [f for t, f in rows if t == pytest.approx(4 / 7, abs=1e-15)]
    assert len(at) == 2 and at[1] > at[0]
    assert ts == sorted(ts)


def test_levelset_and_point(tmp_path, capsys):
    assert run(["levelset", "--config", cfg("mixed_pair.json"), "--t", "0.3", "--grid", "20"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["x", "y", "segment"]
    assert {r[2] for r in rows[1:]} == {"curve", "vertical"}
    assert run(["levelset", "--config", cfg("mixed_pair.json"), "--t", "1"]) == 0
    assert capsys.readouterr().out.strip().splitlines()[1:] == ["1,1,curve"]


def test_masses_json(capsys):
    assert run(["masses", "--config", cfg("discrete_pair.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["phiZero"] is not None
    graph = {round(g["t"], 12): g["mass"] for g in out["graphMasses"]}
    assert graph[0.25] == pytest.approx(0.25)


def test_decompose(capsys):
    assert run(["decompose", "--config", cfg("exp_comonotone.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["dis"] == pytest.approx(1.0, abs=1e-6)
    assert out["toleranceMet"] is True


def test_verify_suite(tmp_path):
    out = tmp_path / "r.json"
    assert run(["verify", "--config", cfg("exp_independence.json"), "--suite", "kernel", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["overall"] is True
    assert run(["verify", "--config", cfg("exp_independence.json"), "--suite", "bogus"]) == 2


def test_dump_config_roundtrip(tmp_path, capsys):
    assert run(["--dump-config", cfg("mixed_pair.json")]) == 0
    first = capsys.readouterr().out
    p = tmp_path / "dumped.json"
    p.write_text(first)
    assert run(["--dump-config", str(p)]) == 0
    assert capsys.readouterr().out == first


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "archimax", "eval", "--config", cfg("exp_independence.json"),
                        "--x", "0.5", "--y", "0.5"], capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert json.loads(r.stdout)["cdf"] == pytest.approx(0.25)
    r = subprocess.run([sys.executable, "-m", "archimax", "eval", "--config", cfg("exp_independence.json"),
                        "--x", "2", "--y", "0.5"], capture_output=True, text=True, check=False)
    assert r.returncode == 2
