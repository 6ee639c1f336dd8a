"""Command-line entry point and exit codes."""
from __future__ import annotations

import pytest

from core.supervisor import EXIT_CONFIG, EXIT_DIVERGED, EXIT_OK, exit_code
from harness import main

_HOVER = """
duration = 0.2
trajectory.takeoff_time = 0
trajectory.joints = static
trajectory.metrics_start = 0
initial.position = 0, 0, -1
"""


def _write(tmp_path, text: str):
    path = tmp_path / "scenario.cfg"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_exit_code_mapping():
    assert exit_code({"status": "completed"}) == EXIT_OK
    assert exit_code({"status": "diverged"}) == EXIT_DIVERGED
    assert exit_code({"status": "config_error"}) == EXIT_CONFIG
    assert exit_code({}) == EXIT_DIVERGED


def test_run_writes_artefacts(tmp_path):
    out = tmp_path / "out" / "hover.csv"
    code = main(["run", _write(tmp_path, _HOVER), "--out", str(out), "--controller", "PID"])
    assert code == EXIT_OK
    assert out.exists()
    assert out.with_suffix(".json").exists()
    assert out.with_suffix(".txt").exists()
    assert (out.parent / "resolved.cfg").exists()


def test_run_divergence_exits_one(tmp_path):
    cfg = _write(tmp_path, _HOVER + "initial.euler = 0, 1.5707963267948966, 0\n")
    out = tmp_path / "diverged.csv"
    assert main(["run", cfg, "--out", str(out)]) == EXIT_DIVERGED
    assert out.exists()
    assert not out.with_suffix(".txt").exists()


def test_bad_configuration_exits_two(tmp_path):
    assert main(["run", _write(tmp_path, "plant.mass = 3\n")]) == EXIT_CONFIG
    assert main(["compare", _write(tmp_path, "dt = 0.0007\n")]) == EXIT_CONFIG
    assert main(["run", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG


def test_short_run_without_window_keys_exits_zero(tmp_path):
    out = tmp_path / "short.csv"
    assert main(["run", _write(tmp_path, "duration = 1\n"), "--out", str(out)]) == EXIT_OK
    assert out.with_suffix(".txt").exists()


def test_repeated_runs_write_identical_logs(tmp_path):
    cfg = _write(
        tmp_path,
        _HOVER.replace("joints = static", "joints = sine") + "trajectory.joint_switch_time = 0\n",
    )
    first, second = tmp_path / "a" / "run.csv", tmp_path / "b" / "run.csv"
    assert main(["run", cfg, "--out", str(first)]) == EXIT_OK
    assert main(["run", cfg, "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_compare_writes_all_logs(tmp_path):
    out = tmp_path / "cmp"
    code = main(["compare", _write(tmp_path, _HOVER), "--out", str(out), "--serial"])
    assert code == EXIT_OK
    for name in ("PID", "FTSMC", "FOFTSMC"):
        assert (out / f"{name}.csv").exists()
    assert (out / "comparison.txt").exists()


def test_validate_fractional_suite():
    assert main(["validate", "--suite", "frac"]) == EXIT_OK


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["run", "--controller", "LQR"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
