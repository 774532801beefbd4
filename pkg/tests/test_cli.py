"""CLI: exit codes, file outputs, determinism."""

import json
import subprocess
import sys

import pytest

from greenloop.cli import main
from greenloop.scenario_file import serialize_scenario
from greenloop.sim_engine import scenario_step_response


def test_run_step_response_csv(tmp_path, capsys):
    out = tmp_path / "a.csv"
    assert main(["run", "--scenario", "step_response", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 601  # header + 600 records
    metrics = json.loads((tmp_path / "a.csv.metrics.json").read_text())
    assert metrics["response_latency_cycles"] == 1
    assert metrics["time_to_full_duty_ms"] <= 200
    stdout = capsys.readouterr().out
    assert "response_latency_cycles" in stdout


def test_run_is_byte_identical_across_invocations(tmp_path):
    outs = []
    for name in ("one.csv", "two.csv"):
        path = tmp_path / name
        assert main(["run", "--scenario", "disturbance", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_run_jsonl_format(tmp_path):
    out = tmp_path / "log.jsonl"
    assert main(["run", "--scenario", "step_response", "--format", "jsonl",
                 "--out", str(out), "--duration", "1"]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 10
    assert json.loads(lines[0])["t_ms"] == 0


def test_run_zero_duration_writes_empty_log(tmp_path):
    out = tmp_path / "empty.csv"
    assert main(["run", "--scenario", "step_response", "--duration", "0",
                 "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1:] == []


def test_run_scenario_file(tmp_path):
    scenario_path = tmp_path / "custom.scn"
    scenario_path.write_text(serialize_scenario(scenario_step_response()))
    out = tmp_path / "log.csv"
    assert main(["run", "--scenario", str(scenario_path), "--out", str(out),
                 "--duration", "2"]) == 0
    assert len(out.read_text().splitlines()) == 21


def test_unknown_scenario_exits_2(capsys):
    assert main(["run", "--scenario", "nosuch"]) == 2
    assert "unknown scenario" in capsys.readouterr().err


def test_bad_scenario_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("name x\nduration_ms 10\ninitial_temp_deci 0\nat 5 explode\n")
    assert main(["run", "--scenario", str(bad)]) == 2
    assert "line 4" in capsys.readouterr().err


def test_invalid_override_exits_2(capsys):
    assert main(["run", "--scenario", "step_response", "--kp", "-1"]) == 2
    assert main(["run", "--scenario", "step_response", "--k-fan", "0.0000000001"]) == 2
    capsys.readouterr()


def test_unstable_plant_override_exits_2(capsys):
    assert main(["run", "--scenario", "step_response", "--k-fan", "11"]) == 2
    assert "unstable" in capsys.readouterr().err


def test_io_failure_exits_3(tmp_path, capsys):
    missing_dir = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["run", "--scenario", "step_response", "--duration", "1",
                 "--out", str(missing_dir)]) == 3
    assert "error writing" in capsys.readouterr().err


def test_gain_overrides_change_the_log(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["run", "--scenario", "disturbance", "--duration", "30", "--out", str(a)])
    main(["run", "--scenario", "disturbance", "--duration", "30", "--out", str(b),
          "--kp", "100", "--ki", "0", "--kd", "0"])
    assert a.read_bytes() != b.read_bytes()


def test_installed_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "greenloop.cli", "run", "--scenario", "step_response",
         "--duration", "1"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    assert "step_response" in proc.stdout


@pytest.mark.parametrize("argv", [[], ["run"]])
def test_missing_required_arguments_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
