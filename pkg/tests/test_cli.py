import json
import subprocess
import sys

import pytest

from rumornet.cli import main


def run(args, capsys):
    assert main(args) == 0
    return capsys.readouterr().out


def test_generate_sequence(capsys):
    obj = json.loads(run(["generate", "--kind", "regular", "--n", "10", "--d", "3"], capsys))
    assert obj["degrees"] == [3] * 10 and obj["total_stubs"] == 30


def test_generate_graph(capsys):
    out = run(["generate", "--spec", '{"kind":"regular","n":6,"d":2}', "--graph", "--seed", "1"], capsys)
    lines = out.splitlines()
    assert lines[0] == "# n=6 m=6" and len(lines) == 7


def test_constants(capsys):
    obj = json.loads(run(["constants", "--kind", "regular", "--n", "1000", "--d", "4"], capsys))
    assert obj["delta"] == 3 and obj["M"] == 4


def test_simulate_json_and_csv(capsys):
    base = ["simulate", "--kind", "regular", "--n", "500", "--d", "4", "--seed", "3"]
    obj = json.loads(run(base, capsys))
    assert obj["protocol"] == "push" and obj["T"] > 0
    assert run(base, capsys) == json.dumps(obj, indent=2) + "\n"
    csv = run(base + ["--csv", "--protocol", "pull"], capsys)
    assert csv.startswith("round,informed_count\n0,1\n")
    obj = json.loads(run(["simulate", "--complete", "64", "--seed", "1"], capsys))
    assert obj["n"] == 64


def test_drp(tmp_path, capsys):
    rows = tmp_path / "rows.csv"
    obj = json.loads(run(["drp", "--kind", "regular", "--n", "2048", "--d", "4", "--alpha", "0.1",
                          "--rows", str(rows)], capsys))
    assert obj["t1"] <= obj["t2"] <= obj["t3"]
    assert rows.read_text().startswith("round,phase,informed")


def test_sweep(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": {"kind": "regular", "n": 10, "d": 4}, "protocol": "push",
                               "eps": [0.05], "n_list": [128, 256, 512], "trials": 2}))
    out = tmp_path / "sweep.csv"
    summary = json.loads(run(["sweep", "--config", str(cfg), "--out", str(out), "--seed", "9"], capsys))
    assert summary["config"]["master_seed"] == 9
    assert summary["fits"]["0.05"]["points"] == 3
    assert len(out.read_text().splitlines()) == 7


def test_sweep_needs_config():
    with pytest.raises(SystemExit):
        main(["sweep"])


def test_simplicity(capsys):
    obj = json.loads(run(["simplicity", "--kind", "explicit", "--degrees", "1,1", "--samples", "50"], capsys))
    assert obj["empirical"] == 1.0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rumornet", "constants", "--kind", "regular",
                          "--n", "100", "--d", "4"], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["delta"] == 3
