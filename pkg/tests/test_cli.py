import csv
import json

import numpy as np
import pytest

from sta_fields import parallel
from sta_fields.cli import main
from sta_fields.verify import check_names


@pytest.fixture(autouse=True)
def restore_threads(monkeypatch):
    monkeypatch.setattr(parallel, "_threads", None)
    monkeypatch.delenv(parallel.ENV_VAR, raising=False)


def table(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float).reshape(-1, len(rows[0]))


def columns(path, prefix):
    header, data = table(path)
    return data[:, [i for i, h in enumerate(header) if h.startswith(prefix)]]


# verify ---------------------------------------------------------------------


def test_verify_all_passes(capsys):
    assert main(["verify", "--suite", "all"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and rep["count"] == len(rep["checks"])


def test_verify_em_reports_at_least_twenty_checks(capsys, tmp_path):
    assert main(["verify", "--suite", "em", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "verify_em.json").read_text())
    assert rep["count"] >= 20
    assert json.loads(capsys.readouterr().out) == rep


def test_injected_fault_fails_the_run(capsys):
    target = check_names("lattice")[1]
    assert main(["verify", "--suite", "lattice", "--inject-fault", target, "--fault-seed", "1"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert [f"lattice.{c['name']}" for c in rep["checks"] if not c["passed"]] == [target]


def test_unknown_fault_target_is_a_usage_error(capsys):
    assert main(["verify", "--inject-fault", "no_such_check"]) == 2


# exit codes -----------------------------------------------------------------


def test_config_errors_exit_2(tmp_path, write_config, capsys):
    assert main(["wave", "--config", str(tmp_path / "missing.json")]) == 2
    path = write_config({"theory": "em", "lattice": {"dims": [4, 4, 4], "spacing": [1, 1, 1]}, "bogus": 1}, "bad.json")
    assert main(["wave", "--config", str(path), "--out", str(tmp_path)]) == 2
    assert "$" in capsys.readouterr().err


def test_cfl_violation_exits_3_before_stepping(tmp_path, write_config):
    path = write_config(
        {"theory": "em", "lattice": {"dims": [4, 4, 4], "spacing": [0.25, 0.25, 0.25], "dt": 1.0, "steps": 5}},
        "cfl.json",
    )
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "o")]) == 3
    assert not (tmp_path / "o" / "audit.csv").exists()


def test_bad_thread_count_is_rejected(configs, tmp_path):
    assert main(["wave", "--config", str(configs / "em_circular_wave.json"), "--out", str(tmp_path), "--threads", "0"]) == 2


# wave -------------------------------------------------------------------------


def test_circular_wave_residual_column(configs, tmp_path):
    assert main(["wave", "--config", str(configs / "em_circular_wave.json"), "--out", str(tmp_path)]) == 0
    res = columns(tmp_path / "wave.csv", "residual")
    assert res.size == 8**3 and res.max() <= 1e-12
    summary = json.loads((tmp_path / "wave.json").read_text())
    assert summary["max_residual"] <= 1e-12


def test_two_wave_spin_column_points_along_z(configs, tmp_path):
    assert main(["wave", "--config", str(configs / "acoustic_two_wave_spin.json"), "--out", str(tmp_path)]) == 0
    S = columns(tmp_path / "wave.csv", "S_")
    scale = np.abs(S).max()
    assert scale > 0
    assert np.abs(S[:, :2]).max() <= 1e-10 * scale
    assert np.abs(S[:, 2]).min() > 0


def test_empty_wave_list_dumps_zero_fields(tmp_path, write_config):
    path = write_config({"theory": "em", "lattice": {"dims": [4, 4, 4], "spacing": [1, 1, 1]}}, "empty.json")
    assert main(["wave", "--config", str(path), "--out", str(tmp_path)]) == 0
    header, data = table(tmp_path / "wave.csv")
    assert len(data) == 64
    assert not data[:, 3:].any()


# spin -------------------------------------------------------------------------


def spin_table(configs, name, out):
    assert main(["spin", "--config", str(configs / name), "--out", str(out)]) == 0
    header, data = table(out / "spin.csv")
    return data[:, 3:6], data[:, 6:9]


def test_acoustic_spin_contradiction(configs, tmp_path):
    trad, corr = spin_table(configs, "acoustic_two_wave_spin.json", tmp_path)
    assert not trad.any()
    assert np.abs(corr[:, 2]).min() > 0


def test_em_circular_spin_tables_agree(configs, tmp_path):
    trad, corr = spin_table(configs, "em_circular_wave.json", tmp_path)
    assert np.abs(corr).max() > 0
    assert np.abs(trad - corr).max() <= 1e-10 * np.abs(corr).max()


def test_linear_polarization_has_no_spin(configs, tmp_path):
    trad, corr = spin_table(configs, "em_linear_wave.json", tmp_path)
    assert np.abs(trad).max() <= 1e-12 and np.abs(corr).max() <= 1e-12


# simulate ---------------------------------------------------------------------


def test_zero_step_run_writes_only_the_initial_snapshot(configs, tmp_path, write_config):
    raw = json.loads((configs / "em_plane_wave_regression.json").read_text())
    raw["lattice"]["steps"] = 0
    assert main(["simulate", "--config", str(write_config(raw, "zero.json")), "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["snapshots"] == ["step000000_field.csv", "step000000_potential.csv"]
    assert sorted(p.name for p in (tmp_path / "snapshots").glob("*.csv")) == summary["snapshots"]


def test_probe_trajectory_has_monotone_proper_time(configs, tmp_path):
    assert main(["simulate", "--config", str(configs / "em_probe_in_wave.json"), "--out", str(tmp_path)]) == 0
    header, data = table(tmp_path / "probe_0.csv")
    tau = data[:, header.index("tau")]
    assert len(tau) == 101
    assert (np.diff(tau) > 0).all()
    audit_header, audit = table(tmp_path / "audit.csv")
    assert audit[:, audit_header.index("drift")].max() <= 1e-4


def test_outputs_are_bit_identical_across_thread_counts(configs, tmp_path):
    cfg = str(configs / "em_plane_wave_regression.json")
    for n in (1, 4):
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / f"t{n}"), "--threads", str(n)]) == 0
    files = sorted(p.relative_to(tmp_path / "t1") for p in (tmp_path / "t1").rglob("*") if p.is_file())
    assert files
    for rel in files:
        assert (tmp_path / "t1" / rel).read_bytes() == (tmp_path / "t4" / rel).read_bytes(), rel


def test_thread_count_falls_back_to_the_environment(configs, tmp_path, monkeypatch):
    cfg = str(configs / "em_circular_wave.json")
    monkeypatch.setenv(parallel.ENV_VAR, "3")
    assert main(["wave", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert parallel.get_threads() == 3
    monkeypatch.setenv(parallel.ENV_VAR, "nonsense")
    assert main(["wave", "--config", cfg, "--out", str(tmp_path)]) == 2
