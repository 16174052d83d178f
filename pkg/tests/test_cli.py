import json

import pytest

from blochfsm.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_cfg(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_simulate_default_summary(capsys):
    code, out, _ = run(["simulate"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["rho11"] == pytest.approx(0.60015, abs=1e-5)
    assert doc["trajectory"] is None
    assert doc["samples"] == 10001


def test_simulate_excited(tmp_path, capsys):
    ground = json.loads(run(["simulate"], capsys)[1])
    cfg = write_cfg(tmp_path, {"initial_state": "excited"})
    excited = json.loads(run(["simulate", "--config", cfg], capsys)[1])
    assert excited["rho00"] == pytest.approx(0.60015, abs=1e-5)
    assert excited["S_final"][1] == pytest.approx(-ground["S_final"][1], abs=1e-9)


def test_simulate_writes_csv_deterministically(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["simulate", "--output", str(a), "--seed", "7"], capsys)[0] == 0
    assert run(["--seed", "7", "simulate", "--output", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    meta = json.loads(lines[0][2:])
    assert meta["seed"] == 7 and meta["samples"] == 10001
    assert lines[1].split(",")[:4] == ["t", "S1", "S2", "S3"]
    assert len(lines) == 10003


def test_simulate_json_format(tmp_path, capsys):
    out = tmp_path / "t.json"
    cfg = write_cfg(tmp_path, {"decimation": 100})
    assert run(["simulate", "--config", cfg, "--format", "json", "--output", str(out)], capsys)[0] == 0
    doc = json.loads(out.read_text())
    assert doc["columns"][0] == "t" and len(doc["data"]) == 101


def test_config_error_exit(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"dt": -1})
    code, _, err = run(["simulate", "--config", cfg], capsys)
    assert code == 2 and "dt must be positive" in err


def test_missing_config_file_io_exit(tmp_path, capsys):
    assert run(["simulate", "--config", str(tmp_path / "nope.json")], capsys)[0] == 1


def test_propagate_both(capsys):
    code, out, _ = run(["propagate", "--method", "both"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["max_deviation"] < 1e-7
    assert doc["sylvester"]["orthogonality_residual"] < 1e-10


def test_propagate_non_commuting_exit(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"delta": 0.3})
    code, _, err = run(["propagate", "--method", "sylvester", "--config", cfg], capsys)
    assert code == 3 and "RK4" in err


def test_parity_logical(capsys):
    code, out, _ = run(["parity", "--bits", "0110"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["outputs"] == "0100" and doc["final_parity"] == "even"


def test_parity_physical(capsys):
    code, out, _ = run(["parity", "--bits", "1011", "--start", "odd", "--mode", "physical"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["final_state"] == 0
    assert all("observables" in r for r in doc["transcript"])


def test_parity_bad_bits(capsys):
    assert run(["parity", "--bits", "01x"], capsys)[0] == 2


def test_parity_mismatch_exit(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"thresholds": {"population": 0.65}})
    code, _, err = run(["parity", "--bits", "0", "--start", "odd", "--mode", "physical", "--config", cfg], capsys)
    assert code == 4 and "rho11" in err


def test_parity_state_table(capsys):
    code, out, _ = run(["parity", "--state-table", "--mode", "physical"], capsys)
    assert code == 0
    assert out == "PS,PI,NS,PO\n0,0,0,0\n0,1,1,0\n1,0,1,1\n1,1,0,1\n"


def test_generators_check(capsys):
    code, out, _ = run(["generators", "--n", "3", "--check"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 8
    assert doc["residuals"]["orthogonality"] < 1e-12


def test_generators_bad_n(capsys):
    assert run(["generators", "--n", "1"], capsys)[0] == 2


def test_sweep_order_independent_of_workers(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"dt": 1e-2})
    code1, out1, _ = run(["sweep", "--axis", "omega0", "--values", "1.5,0.5,1.0", "--config", cfg], capsys)
    code2, out2, _ = run(["sweep", "--axis", "omega0", "--values", "1.0,1.5,0.5", "--workers", "2", "--config", cfg], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    rows = out1.splitlines()
    assert rows[0].startswith("omega0,pulse_area")
    assert [float(r.split(",")[0]) for r in rows[1:]] == [0.5, 1.0, 1.5]


def test_single_value_sweep_matches_simulate(capsys):
    sim = json.loads(run(["simulate"], capsys)[1])
    _, out, _ = run(["sweep", "--axis", "omega0", "--values", "1.0"], capsys)
    header, row = out.splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert float(rec["rho11"]) == sim["rho11"]
    assert float(rec["pulse_area"]) == sim["pulse_area"]


def test_sweep_empty_values(capsys):
    assert run(["sweep", "--axis", "omega0", "--values", ""], capsys)[0] == 2


def test_sweep_failed_row(capsys):
    code, out, _ = run(["sweep", "--axis", "sigma", "--values", "1.0,-1.0"], capsys)
    assert code == 3
    assert "failed" in out.splitlines()[1]
    assert out.splitlines()[2].endswith(",ok")
