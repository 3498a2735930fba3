"""
End-to-end tests of the nested-mzi command line: exit codes, report
formats, schema conformance and reproducibility.
"""
import json
import re

import numpy as np
import pytest
from jsonschema import Draft202012Validator
from structlog.testing import capture_logs

from src.cli.parser import COMMANDS, FLAGS, build_parser
from src.main import main

FLAG_NAMES = {flag.name for flag in FLAGS}

# Arguments that keep every command fast
COMMAND_ARGS = {
    "run": ["--theta", "0.1001674211615598"],
    "phase-scan": ["--segment", "A", "--points", "16"],
    "solo": [],
    "argue": ["--points", "16"],
    "f-check": [],
    "conclusive": [],
    "accounting": ["--trials", "20000", "--seed", "42"],
    "spectrum": [],
    "weak-values": [],
    "trajectories": [],
}


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def load_schema(schemas_path, command):
    with open(schemas_path / f"{command}.schema.json", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.mark.integration
class TestHelp:

    def test_every_command_is_registered(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--help"])
        assert exc_info.value.code == 0
        out = capsys.readouterr().out
        for command in COMMANDS:
            assert command in out

    @pytest.mark.parametrize("command", list(COMMANDS))
    def test_help_documents_every_flag(self, capsys, command):
        with pytest.raises(SystemExit):
            main([command, "--help"])
        out = capsys.readouterr().out
        shown = set(re.findall(r"--[a-z][a-z-]*", out)) - {"--help"}
        assert shown <= FLAG_NAMES
        for flag in FLAGS:
            if command in flag.commands:
                assert flag.name in out

    def test_no_undocumented_options(self):
        parser = build_parser()
        subparsers = next(action for action in parser._actions if action.dest == "command")
        for command, sub in subparsers.choices.items():
            for action in sub._actions:
                for option in action.option_strings:
                    if option in ("-h", "--help"):
                        continue
                    assert option in FLAG_NAMES, f"{command} accepts undocumented {option}"
                    assert action.help


@pytest.mark.integration
class TestExitCodes:

    def test_argue_on_tuned_network(self, capsys):
        code, out, _ = run_cli(capsys, "argue", "--points", "16")
        assert code == 0
        result = json.loads(out)["result"]
        assert result["contradiction"] is True
        assert result["contradiction_pair"] == ["B", "C"]

    def test_argue_on_detuned_network_is_a_physics_failure(self, capsys, write_config):
        code, out, err = run_cli(capsys, "argue", "--config", write_config("detuned_bs1"))
        assert code == 2
        assert out == ""
        assert err.strip()

    def test_bad_config_exits_one(self, capsys, write_config):
        code, out, err = run_cli(capsys, "run", "--config", write_config("bad_marker"))
        assert code == 1
        assert out == ""
        assert "markers.0.location" in err

    def test_unknown_flag_exits_one(self, capsys):
        code, _, _ = run_cli(capsys, "argue", "--trials", "5")
        assert code == 1

    def test_csv_for_a_non_tabular_report_exits_one(self, capsys):
        code, out, _ = run_cli(capsys, "argue", "--format", "csv")
        assert code == 1
        assert out == ""

    def test_missing_config_file_exits_one(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "solo", "--config", str(tmp_path / "absent.json"))
        assert code == 1

    @pytest.mark.parametrize("argv, key", [
        (["run", "--theta", "2"], "--theta"),
        (["accounting", "--theta", "2", "--trials", "10"], "--theta"),
        (["phase-scan", "--points", "1"], "--points"),
        (["accounting", "--seed", "-1"], "--seed"),
    ])
    def test_out_of_range_flag_names_its_field(self, capsys, argv, key):
        code, out, err = run_cli(capsys, *argv)
        assert code == 1
        assert out == ""
        assert f"[key: {key}]" in err
        assert "validation error for" not in err


@pytest.mark.integration
class TestReports:

    def test_phase_scan_csv(self, capsys):
        code, out, _ = run_cli(capsys, "phase-scan", "--segment", "A", "--points", "32", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "phi,p_d"
        assert len(lines) == 33
        for line in lines[1:]:
            phi, p_d = (float(value) for value in line.split(","))
            assert abs(p_d - (5 - 4 * np.cos(phi)) / 9) < 1e-12

    def test_solo_paths(self, capsys):
        code, out, _ = run_cli(capsys, "solo")
        assert code == 0
        result = json.loads(out)["result"]
        for path in ("A", "B", "C"):
            assert result["solo"][path] == pytest.approx(1 / 9, abs=1e-12)
        assert result["full"] == pytest.approx(1 / 9, abs=1e-12)

    def test_run_with_markers(self, capsys, write_config):
        code, out, _ = run_cli(capsys, "run", "--config", write_config("weak_markers"))
        assert code == 0
        result = json.loads(out)["result"]
        assert result["total_probability"] == pytest.approx(1.0, abs=1e-12)
        traces = {trace["location"]: trace["excitation_probability"] for trace in result["trace"]["markers"]}
        assert traces["A"] == pytest.approx(traces["C"], abs=1e-12)

    def test_out_keeps_stdout_empty(self, capsys, tmp_path):
        target = tmp_path / "reports" / "weak-values.json"
        code, out, _ = run_cli(capsys, "weak-values", "--out", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["schema"] == "mzi.weak-values.v1"

    @pytest.mark.parametrize("command", list(COMMANDS))
    def test_reports_match_their_schema(self, capsys, schemas_path, write_config, command):
        extra = ["--config", write_config("small_spectrum")] if command == "spectrum" else []
        code, out, err = run_cli(capsys, command, *COMMAND_ARGS[command], *extra)
        assert code == 0, err
        report = json.loads(out)
        assert report["command"] == command
        Draft202012Validator(load_schema(schemas_path, command)).validate(report)

    def test_published_schemas_are_valid(self, schemas_path):
        for path in sorted(schemas_path.glob("*.schema.json")):
            with open(path, encoding="utf-8") as handle:
                Draft202012Validator.check_schema(json.load(handle))


@pytest.mark.integration
class TestReproducibility:

    def test_accounting_reruns_are_byte_identical(self, capsys, write_config):
        config = write_config("small_accounting")
        _, first, _ = run_cli(capsys, "accounting", "--config", config, "--workers", "1")
        _, second, _ = run_cli(capsys, "accounting", "--config", config, "--workers", "1")
        _, threaded, _ = run_cli(capsys, "accounting", "--config", config, "--workers", "4")
        assert first == second
        assert first == threaded

    def test_accounting_csv(self, capsys, write_config):
        code, out, _ = run_cli(capsys, "accounting", "--config", write_config("small_accounting"), "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "combination,count,fraction"

    @pytest.mark.slow
    def test_million_photon_accounting(self, capsys):
        args = ["accounting", "--theta", "0.1001674211615598", "--trials", "1000000", "--seed", "20170817"]
        _, first, _ = run_cli(capsys, *args, "--workers", "1")
        _, second, _ = run_cli(capsys, *args, "--workers", "3")
        assert first == second
        result = json.loads(first)["result"]
        assert result["double_conclusive"] == 0
        assert result["fraction_at_d"] == pytest.approx(1.02 / 9, abs=5 * np.sqrt(0.1133 * 0.8867 / 1e6))


@pytest.mark.integration
class TestAccountingMarkers:

    def write(self, tmp_path, document):
        path = tmp_path / "accounting.json"
        path.write_text(json.dumps(document, indent=2), encoding="utf-8")
        return str(path)

    def test_config_markers_win_over_the_block_angle(self, capsys, tmp_path):
        markers = [{"location": location, "theta": 0.2} for location in ("A", "B", "C")]
        config = self.write(tmp_path, {"markers": markers, "accounting": {"theta": 0.1, "trials": 1000, "seed": 1}})
        with capture_logs() as logs:
            code, out, err = run_cli(capsys, "accounting", "--config", config)
        assert code == 0, err
        assert json.loads(out)["result"]["theta"] == pytest.approx(0.2)
        ignored = [entry for entry in logs if entry["event"] == "accounting_theta_ignored"]
        assert len(ignored) == 1
        assert ignored[0]["theta"] == pytest.approx(0.1)
        assert ignored[0]["markers"] == ["A", "B", "C"]
        assert ignored[0]["log_level"] == "warning"

    def test_markers_alone_do_not_warn(self, capsys, sample_configs, tmp_path):
        config = self.write(tmp_path, {**sample_configs["weak_markers"], "accounting": {"trials": 1000, "seed": 1}})
        with capture_logs() as logs:
            code, _, err = run_cli(capsys, "accounting", "--config", config)
        assert code == 0, err
        assert not [entry for entry in logs if entry["event"] == "accounting_theta_ignored"]

    def test_theta_flag_replaces_config_markers(self, capsys, sample_configs, tmp_path):
        config = self.write(tmp_path, {**sample_configs["weak_markers"], "accounting": {"trials": 1000, "seed": 1}})
        code, out, err = run_cli(capsys, "accounting", "--config", config, "--theta", "0.3")
        assert code == 0, err
        assert json.loads(out)["result"]["theta"] == pytest.approx(0.3)
