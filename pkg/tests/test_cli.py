"""Command-line interface: verbs, exit codes, file contracts."""

import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import extremals as ex
from extremals.cli import CliError, emit_trajectory, load_scenario_file, main


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "extremals.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


# --- verbs -------------------------------------------------------------------


def test_list_examples():
    proc = run_cli("list-examples")
    assert proc.returncode == 0
    for name in ("rolling_disc", "rigid_body", "rolling_ball"):
        assert name in proc.stdout


def test_validate_rolling_ball():
    proc = run_cli("validate", "--example", "rolling_ball", "--samples", "100")
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == 3
    for identity, line in zip(("antisymmetry", "compatibility", "jacobi"), lines):
        assert line.startswith(identity)
        assert line.endswith("PASS")


def test_validate_all_examples():
    for name in ("rolling_disc", "rigid_body", "rolling_ball"):
        proc = run_cli("validate", "--example", name)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.count("PASS") == 3


def test_run_end_to_end(tmp_path):
    out = tmp_path / "traj.csv"
    proc = run_cli(
        "run",
        "--example", "rigid_body",
        "--kind", "kinematic",
        "--param", "I2=1", "--param", "I3=1",
        "--init", "0,0.1,0.2,1,1,0",
        "--t1", "0.2",
        "--step", "1e-2",
        "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,x1,x2,x3,mu1,mu2,mu3,H")
    assert len(lines) == 22  # header + 21 samples
    report = (tmp_path / "traj_report.txt").read_text()
    assert "H " in report and "PASS" in report
    assert report == proc.stdout


def test_run_deterministic_output(tmp_path):
    args = [
        "run",
        "--example", "rolling_ball",
        "--kind", "dynamic",
        "--init", "0,0,0.3,0.2,0.1,0.2,0.1,0.3,0.05,0.15,0,0,0",
        "--t1", "0.2",
        "--step", "1e-2",
    ]
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert run_cli(*args, "--output", str(first)).returncode == 0
    assert run_cli(*args, "--output", str(second)).returncode == 0
    assert first.read_bytes() == second.read_bytes()


def test_disc_dynamic_column_contract(tmp_path):
    out = tmp_path / "disc.csv"
    proc = run_cli(
        "run",
        "--example", "rolling_disc",
        "--kind", "dynamic",
        "--init", "0,0,0,0,1,1,1,0,0,0,0,0",
        "--t1", "0.1",
        "--step", "1e-2",
        "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    header = out.read_text().splitlines()[0]
    assert header.startswith("t,x1,x2,x3,x4,y3,y4,mu1,mu2,mu3,mu4,pi3,pi4,H")


def test_run_rk45(tmp_path):
    out = tmp_path / "traj45.csv"
    proc = run_cli(
        "run",
        "--example", "rigid_body",
        "--kind", "kinematic",
        "--init", "0,0.1,0.2,1,1,0",
        "--t1", "0.2",
        "--step", "1e-2",
        "--integrator", "rk45",
        "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    assert len(out.read_text().splitlines()) == 22


def test_run_abnormal(tmp_path):
    out = tmp_path / "abn.csv"
    proc = run_cli(
        "run",
        "--example", "rigid_body",
        "--kind", "kinematic-abnormal",
        "--init", "0,0,0,1,0,0",
        "--control", "0.5,0",
        "--t1", "0.2",
        "--step", "1e-2",
        "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    header = out.read_text().splitlines()[0]
    assert "mu_a" in header and "bracket" in header


def test_run_figures(tmp_path):
    out = tmp_path / "fig.csv"
    proc = run_cli(
        "run",
        "--example", "rigid_body",
        "--kind", "kinematic",
        "--init", "0,0.1,0.2,1,1,0",
        "--t1", "0.1",
        "--step", "1e-2",
        "--output", str(out),
        "--figures",
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "fig_states.png").exists()
    assert (tmp_path / "fig_monitors.png").exists()


def test_monitor_subset(tmp_path):
    out = tmp_path / "sub.csv"
    proc = run_cli(
        "run",
        "--example", "rolling_disc",
        "--kind", "dynamic",
        "--init", "0,0,0,0,1,1,1,0,0,0,0,0",
        "--t1", "0.1",
        "--step", "1e-2",
        "--monitors", "mu1",
        "--output", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    header = out.read_text().splitlines()[0]
    assert header.endswith("pi3,pi4,H,mu1")


# --- exit codes -----------------------------------------------------------------


def test_usage_errors_exit_one(tmp_path):
    cases = [
        (
            ["run", "--example", "rigid_body", "--kind", "kinematic",
             "--init", "0,0,0,1,1,0", "--t1", "1", "--step=-1e-3"],
            "nonpositive step",
        ),
        (
            ["run", "--example", "rigid_body", "--kind", "kinematic",
             "--init", "0,0,0,1,1,0", "--t1", "1", "--step", "0"],
            "nonpositive step",
        ),
        (
            ["run", "--kind", "kinematic", "--init", "0", "--t1", "1", "--step", "1e-3"],
            "missing required option --example",
        ),
        (
            ["run", "--example", "rigid_body", "--kind", "sideways",
             "--init", "0", "--t1", "1", "--step", "1e-3"],
            "unknown kind",
        ),
        (
            ["run", "--example", "rigid_body", "--kind", "kinematic",
             "--init", "0,zero,0,1,1,0", "--t1", "1", "--step", "1e-3"],
            "malformed initial state",
        ),
        (
            ["run", "--example", "rigid_body", "--kind", "kinematic",
             "--init", "0,0,0,1,1,0", "--t0", "2", "--t1", "1", "--step", "1e-3"],
            "t1 must be greater than t0",
        ),
        (
            ["run", "--example", "rigid_body", "--kind", "kinematic-abnormal",
             "--init", "0,0,0,1,0,0", "--t1", "1", "--step", "1e-3"],
            "abnormal runs require --control",
        ),
        (["explode"], ""),
    ]
    for args, expected in cases:
        proc = run_cli(*args)
        assert proc.returncode == 1, (args, proc.stderr)
        assert proc.stderr.startswith("error:"), args
        assert expected in proc.stderr, (args, proc.stderr)


def test_validation_failures_exit_two(tmp_path):
    cases = [
        ["run", "--example", "unicycle", "--kind", "kinematic",
         "--init", "0", "--t1", "1", "--step", "1e-3"],
        ["run", "--example", "rigid_body", "--kind", "kinematic",
         "--param", "I2=0", "--init", "0,0,0,1,1,0", "--t1", "1", "--step", "1e-3"],
        ["run", "--example", "rigid_body", "--kind", "kinematic",
         "--init", "0,0,0,1,1", "--t1", "1", "--step", "1e-3"],
        ["run", "--example", "rigid_body", "--kind", "kinematic",
         "--init", "0,0,0,1,1,0", "--t1", "1", "--step", "1e-3",
         "--monitors", "angular"],
        ["run", "--example", "rigid_body", "--kind", "kinematic-abnormal",
         "--init", "0,0,0,0,1,0", "--control", "1,0",
         "--t1", "1", "--step", "1e-3"],
        ["validate", "--example", "unicycle"],
    ]
    for args in cases:
        proc = run_cli(*args)
        assert proc.returncode == 2, (args, proc.stderr)
        assert proc.stderr.startswith("error:"), args


def test_integration_failure_exits_three(tmp_path):
    out = tmp_path / "blowup.csv"
    proc = run_cli(
        "run",
        "--example", "rolling_ball",
        "--kind", "dynamic",
        "--init", "0,0,8,8,8,8,8,8,8,8,8,8,8",
        "--t1", "50",
        "--step", "0.05",
        "--output", str(out),
    )
    assert proc.returncode == 3
    assert proc.stderr.startswith("error: integration aborted")
    assert len(proc.stderr.strip().splitlines()) == 1


# --- scenario files ---------------------------------------------------------------


def test_scenario_file_matches_flags(tmp_path):
    scenario = tmp_path / "case.scn"
    scenario.write_text(
        "# symmetric body, short run\n"
        "example = rigid_body\n"
        "kind = kinematic\n"
        "param.I2 = 1\n"
        "param.I3 = 1\n"
        "initial = 0,0.1,0.2,1,1,0\n"
        "t1 = 0.2\n"
        "step = 1e-2\n"
        f"output = {tmp_path / 'from_file.csv'}\n"
    )
    assert run_cli("run", "--scenario", str(scenario)).returncode == 0
    flag_out = tmp_path / "from_flags.csv"
    run_cli(
        "run",
        "--example", "rigid_body",
        "--kind", "kinematic",
        "--init", "0,0.1,0.2,1,1,0",
        "--t1", "0.2",
        "--step", "1e-2",
        "--output", str(flag_out),
    )
    assert (tmp_path / "from_file.csv").read_bytes() == flag_out.read_bytes()


def test_scenario_flag_override(tmp_path):
    scenario = tmp_path / "case.scn"
    scenario.write_text(
        "example = rigid_body\n"
        "kind = kinematic\n"
        "initial = 0,0.1,0.2,1,1,0\n"
        "t1 = 0.2\n"
        "step = 1e-2\n"
    )
    out = tmp_path / "short.csv"
    proc = run_cli(
        "run", "--scenario", str(scenario), "--t1", "0.1", "--output", str(out)
    )
    assert proc.returncode == 0, proc.stderr
    assert len(out.read_text().splitlines()) == 12  # header + 11 samples


def test_scenario_unknown_key(tmp_path):
    scenario = tmp_path / "case.scn"
    scenario.write_text("example = rigid_body\nspeed = 12\n")
    proc = run_cli("run", "--scenario", str(scenario))
    assert proc.returncode == 1
    assert "unknown scenario key" in proc.stderr


def test_scenario_file_parser():
    with pytest.raises(CliError):
        load_scenario_file(Path("/nonexistent/file.scn"))


def test_unwritable_output_exits_one():
    proc = run_cli(
        "run",
        "--example", "rigid_body",
        "--kind", "kinematic",
        "--init", "0,0.1,0.2,1,1,0",
        "--t1", "0.1",
        "--step", "1e-2",
        "--output", "/proc/forbidden/out.csv",
    )
    assert proc.returncode == 1
    assert "cannot write output" in proc.stderr


# --- trajectory emission ------------------------------------------------------------


def test_emit_trajectory_constant(tmp_path):
    traj = ex.Trajectory(
        times=np.array([0.0, 0.5]),
        states=np.array([[1.0, 2.0], [1.0, 2.0]]),
        hamiltonian=np.array([3.0, 3.0]),
    )
    path = tmp_path / "tiny.csv"
    emit_trajectory(traj, ["a", "b"], path)
    text = path.read_text()
    assert text.endswith("\n")
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[0] == "t,a,b,H"
    assert lines[1] == "0,1,2,3"


def test_emit_trajectory_precision(tmp_path):
    third = 1.0 / 3.0
    traj = ex.Trajectory(
        times=np.array([0.0]),
        states=np.array([[third]]),
        hamiltonian=np.array([0.0]),
    )
    path = tmp_path / "prec.csv"
    emit_trajectory(traj, ["v"], path)
    row = path.read_text().splitlines()[1]
    printed = row.split(",")[1]
    assert float(printed) == third
    assert len(printed.replace("0.", "")) >= 16


def test_main_returns_exit_code():
    assert main(["list-examples"]) == 0
    assert main(["validate", "--example", "unicycle"]) == 2
