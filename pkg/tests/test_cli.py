import json
import math

import pytest

from cp2tori.cli import (EXIT_INFEASIBLE, EXIT_NOT_PROVED, EXIT_OK, EXIT_USAGE,
                         main)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_energy_homogeneous_equality(capsys):
    r = f"{1.0 / math.sqrt(3.0):.15f}"
    code, out, _ = run(capsys, "energy", "--family", "homogeneous", "--r", r, r, r)
    assert code == EXIT_OK
    ratio = float(out.split("ratio =")[1])
    assert abs(ratio - 1.0) <= 1e-6


def test_energy_clifford(capsys):
    code, out, _ = run(capsys, "energy", "--family", "clifford")
    assert code == EXIT_OK
    val = float(out.split("E =")[1].split()[0])
    assert val == pytest.approx(4 * math.pi ** 2 / (3 * math.sqrt(3)), rel=1e-11)


def test_energy_mironov_ratio_above_one(capsys):
    code, out, _ = run(capsys, "energy", "--family", "mironov",
                       "--alpha", "2", "1", "-1", "--a1", "1.8", "--a2", "1.2",
                       "--branch", "minus")
    assert code == EXIT_OK
    assert float(out.split("ratio =")[1]) > 1.0


def test_energy_infeasible_exit_code(capsys):
    code, _, err = run(capsys, "energy", "--family", "mironov",
                       "--alpha", "2", "1", "-1", "--a1", "3.0", "--a2", "2.5")
    assert code == EXIT_INFEASIBLE
    assert "infeasible" in err.lower()


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["energy", "--family", "mironov", "--alpha", "2", "1"])  # wrong arity
    assert exc.value.code == EXIT_USAGE


def test_missing_required_flags_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["energy", "--family", "mironov"])  # no alpha/a1/a2
    assert exc.value.code == EXIT_USAGE


def test_scan_csv_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "scan1.csv"
    out2 = tmp_path / "scan2.csv"
    for out in (out1, out2):
        code, _, err = run(capsys, "scan", "--alpha", "2", "1", "-1",
                           "--grid", "5", "--out", str(out))
        assert code == EXIT_OK
        assert "min ratio" in err
    t1, t2 = out1.read_text(), out2.read_text()
    assert t1 == t2  # deterministic at fixed config
    header = t1.splitlines()[0]
    assert header == ("alpha1,alpha2,alpha3,a1,a2,branch,c2,a3,a,T,A,W,E,ratio")
    rows = t1.strip().splitlines()[1:]
    assert rows
    ratio_col = header.split(",").index("ratio")
    assert all(float(r.split(",")[ratio_col]) > 1.0 for r in rows)


def test_scan_parallel_matches_serial(tmp_path, capsys):
    serial = tmp_path / "serial.csv"
    parallel = tmp_path / "parallel.csv"
    args = ["scan", "--alpha", "3", "1", "-1", "--grid", "4"]
    assert main(args + ["--out", str(serial)]) == EXIT_OK
    assert main(args + ["--jobs", "2", "--out", str(parallel)]) == EXIT_OK
    capsys.readouterr()
    assert serial.read_text() == parallel.read_text()


def test_scan_empty_feasible_set_warns(tmp_path, capsys):
    out = tmp_path / "empty.csv"
    code, _, err = run(capsys, "scan", "--alpha", "1", "1", "-1",
                       "--grid", "5", "--out", str(out))
    assert code == EXIT_OK
    assert "zero rows" in err
    assert len(out.read_text().strip().splitlines()) == 1  # header only


def test_verify_single_target_and_threshold(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--target", "B1",
                       "--eps", "1e-3", "--out-dir", str(tmp_path))
    assert code == EXIT_OK
    data = json.loads((tmp_path / "B1.json").read_text())
    assert data["status"] == "proved"
    assert data["epsilon"] == 1e-3
    # a deliberately unprovable threshold fails with a witness
    code, out, _ = run(capsys, "verify", "--target", "B1", "--threshold", "1.2",
                       "--eps", "1e-3", "--out-dir", str(tmp_path))
    assert code == EXIT_NOT_PROVED
    assert "witness" in out


def test_periodicity_json(tmp_path, capsys):
    out = tmp_path / "lattice.json"
    code, stdout, _ = run(capsys, "periodicity", "--alpha", "2", "1", "-1",
                          "--a1", "1.8", "--a2", "1.2", "--branch", "minus",
                          "--tol", "1e-3", "--json-out", str(out))
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["status"] in ("periodic", "not_periodic")
    assert data["alpha"] == [2, 1, -1]
    if data["status"] == "periodic":
        assert data["e1"] == [0.0, 2 * math.pi]
        assert data["N"] >= 1


def test_export_row_count(tmp_path, capsys):
    out = tmp_path / "samples.csv"
    obj = tmp_path / "cloud.obj"
    code, stdout, _ = run(capsys, "export", "--alpha", "2", "1", "-1",
                          "--a1", "1.8", "--a2", "1.2", "--grid", "8", "8",
                          "--out", str(out), "--obj", str(obj))
    assert code == EXIT_OK
    assert len(out.read_text().strip().splitlines()) == 65  # header + 64
    assert obj.read_text().startswith("v ")


def test_mnk_classification(capsys):
    code, out, _ = run(capsys, "mnk", "--m", "2", "--n", "2", "--k", "-2")
    assert code == EXIT_OK and "torus" in out
    code, out, _ = run(capsys, "mnk", "--m", "2", "--n", "2", "--k", "-1")
    assert code == EXIT_OK and "Klein bottle" in out


def test_feasibility_output(capsys):
    code, out, _ = run(capsys, "feasibility", "--alpha", "2", "1", "-1",
                       "--a1", "1.8", "--a2", "1.2")
    assert code == EXIT_OK and "feasible: True" in out
    code, out, _ = run(capsys, "feasibility", "--alpha", "2", "1", "-1",
                       "--a1", "3.0", "--a2", "2.5")
    assert code == EXIT_OK and "feasible: False" in out
    assert "box" in out


def test_params_file(tmp_path, capsys):
    params = tmp_path / "p.json"
    params.write_text(json.dumps(
        {"alpha": [2, 1, -1], "a1": 1.8, "a2": 1.2, "branch": "minus"}))
    code, out, _ = run(capsys, "energy", "--family", "mironov",
                       "--params", str(params))
    assert code == EXIT_OK
    assert float(out.split("ratio =")[1]) > 1.0


def test_config_file_defaults_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grid": 4, "out": str(tmp_path / "from_cfg.csv")}))
    code, _, err = run(capsys, "scan", "--alpha", "2", "1", "-1",
                       "--config", str(cfg))
    assert code == EXIT_OK
    assert (tmp_path / "from_cfg.csv").exists()
    # explicit flag wins over the config value
    code, _, _ = run(capsys, "scan", "--alpha", "2", "1", "-1",
                     "--config", str(cfg), "--out", str(tmp_path / "flag.csv"))
    assert (tmp_path / "flag.csv").exists()
