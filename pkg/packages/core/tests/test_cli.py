# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Tests for the command-line front end.
"""

import io
import json
from fractions import Fraction

import pytest

from equiform_core.cli import (
    EXIT_FAILED, EXIT_INPUT, EXIT_OK, SCAN_HEADER, ParamsFileError, main, parse_params, run,
)
from equiform_core.config import CONFIG
from equiform_core.motion import FamilyKind, MotionParams
from equiform_core.protocol import ParamsFile, RunConfig
from equiform_core.sampling import sample_family
from equiform_core.trigpoly import ScalarMode

ZERO_JSON = {"s_prime": 0, "omega": [0] * 21, "d_prime": [0] * 7}


def _with(data, **changes):
    out = json.loads(json.dumps(data))
    out.update(changes)
    return out


class TestParseParams:
    """Tests for reading parameter files"""

    def test_exact_file(self, write_params, block211_json, block211):
        p = parse_params(write_params(block211_json))
        assert p == block211
        assert p.exact

    def test_fraction_strings(self, write_params):
        data = _with(ZERO_JSON, s_prime="3/4")
        assert parse_params(write_params(data)).s_prime == Fraction(3, 4)

    def test_float_file(self, write_params):
        data = _with(ZERO_JSON, s_prime=0.5)
        p = parse_params(write_params(data))
        assert p.mode is ScalarMode.FLOAT

    def test_forced_modes(self, write_params):
        path = write_params(_with(ZERO_JSON, s_prime=1.0))
        assert parse_params(path, "exact").exact
        assert parse_params(write_params(_with(ZERO_JSON, s_prime=1), "int.json"), "float").mode is ScalarMode.FLOAT
        with pytest.raises(ParamsFileError):
            parse_params(write_params(_with(ZERO_JSON, s_prime=0.5), "half.json"), "exact")

    def test_mixed_modes(self, write_params, block211_json):
        path = write_params(_with(block211_json, s_prime=1.0))
        with pytest.raises(ParamsFileError) as exc:
            parse_params(path)
        assert path in str(exc.value)

    def test_missing_field(self, write_params):
        data = {"s_prime": 1, "d_prime": [0] * 7}
        with pytest.raises(ParamsFileError, match="omega"):
            parse_params(write_params(data))

    def test_wrong_length(self, write_params):
        with pytest.raises(ParamsFileError, match="d_prime"):
            parse_params(write_params(_with(ZERO_JSON, d_prime=[0] * 6)))

    def test_bad_literal(self, write_params):
        with pytest.raises(ParamsFileError, match="s_prime"):
            parse_params(write_params(_with(ZERO_JSON, s_prime="one half")))

    def test_unknown_field(self, write_params):
        with pytest.raises(ParamsFileError):
            parse_params(write_params(_with(ZERO_JSON, b_prime=[0] * 7)))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"s_prime": 1,')
        with pytest.raises(ParamsFileError, match="invalid JSON"):
            parse_params(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParamsFileError, match="cannot read"):
            parse_params(str(tmp_path / "absent.json"))


class TestFileCommands:
    """Tests for subcommands that take parameter files"""

    def test_curvature(self, write_params, block211_json, capsys):
        assert main(["curvature", write_params(block211_json)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "constant K = 1" in out
        assert "k_formula = 1" in out

    def test_curvature_json(self, write_params, block211_json, capsys):
        assert main(["--format", "json", "curvature", write_params(block211_json)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["constant"] is True
        assert report["K"] == "1"
        assert report["method"] == "symbolic"

    def test_zero_motion(self, write_params):
        path = write_params(ZERO_JSON)
        assert main(["check", path]) == EXIT_OK
        assert main(["curvature", path]) == EXIT_INPUT

    def test_check_violation(self, write_params, capsys):
        omega = [0] * 21
        omega[2] = 1
        assert main(["check", write_params(_with(ZERO_JSON, omega=omega))]) == EXIT_FAILED
        assert "violated" in capsys.readouterr().out

    def test_quantities_json(self, write_params, block211_json, capsys):
        assert main(["--format", "json", "quantities", write_params(block211_json)]) == EXIT_OK
        table = json.loads(capsys.readouterr().out)
        assert table["delta"] == "5/2"
        assert table["gamma"] == "6"

    def test_metric_listing(self, write_params, block211_json, capsys):
        assert main(["metric", write_params(block211_json)]) == EXIT_OK
        out = capsys.readouterr().out
        for name in ("g11", "g12", "g13", "g22", "g23", "g33"):
            assert f"{name}:" in out

    def test_metric_json(self, write_params, block211_json, capsys):
        assert main(["--format", "json", "metric", write_params(block211_json)]) == EXIT_OK
        listing = json.loads(capsys.readouterr().out)
        assert set(listing) == {"g11", "g12", "g13", "g22", "g23", "g33"}
        assert listing["g11"]
        assert all({"i", "j", "cos", "sin"} == set(term) for term in listing["g11"])

    def test_check_names_the_balance_reading(self, write_params, block211_json, capsys):
        path = write_params(block211_json)
        assert main(["check", path]) == EXIT_OK
        assert "KNeg32A balance = 36 (derived alpha reading" in capsys.readouterr().out
        assert main(["check", "--reading", "printed", path]) == EXIT_OK
        assert "KNeg32A balance = 12 (printed reading" in capsys.readouterr().out

    def test_check_json_reading(self, write_params, block211_json, capsys):
        assert main(["--format", "json", "check", write_params(block211_json)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["kneg32a_reading"] == "derived"
        assert report["kneg32a_balance"] == "36"

    def test_check_without_preconditions_has_no_balance(self, write_params, capsys):
        omega = [0] * 21
        omega[2] = 1
        main(["--format", "json", "check", write_params(_with(ZERO_JSON, omega=omega))])
        assert json.loads(capsys.readouterr().out)["kneg32a_balance"] is None

    @pytest.mark.parametrize("fmt,command", [("csv", "curvature"), ("csv", "check"), ("json", "fd-check")])
    def test_unsupported_format(self, write_params, block211_json, tmp_path, fmt, command):
        target = tmp_path / "report.out"
        args = ["--format", fmt, "--output", str(target), command, write_params(block211_json)]
        assert main(args) == EXIT_INPUT
        assert not target.exists()

    def test_fd_check(self, write_params, block211_json, capsys):
        assert main(["fd-check", write_params(block211_json)]) == EXIT_OK
        assert "max relative deviation" in capsys.readouterr().out

    def test_multiple_files(self, write_params, block211_json, capsys):
        a = write_params(block211_json, "a.json")
        b = write_params(ZERO_JSON, "b.json")
        assert main(["check", a, b]) == EXIT_OK
        out = capsys.readouterr().out
        assert f"== {a}" in out and f"== {b}" in out

    def test_invalid_file_exit_code(self, write_params):
        assert main(["check", write_params({"s_prime": 1})]) == EXIT_INPUT

    def test_forced_float_mode(self, write_params, block211_json, capsys):
        assert main(["--mode", "float", "curvature", write_params(block211_json)]) == EXIT_OK
        assert "method: spectral" in capsys.readouterr().out


class TestVerify:
    """Tests for the verify subcommand"""

    def test_theorem_on_file(self, write_params, block211_json, capsys):
        assert main(["verify", "--theorem", "3.4", write_params(block211_json)]) == EXIT_OK
        assert "PASS" in capsys.readouterr().out

    def test_theorem_fails_on_file(self, write_params, block211_json):
        assert main(["verify", "--theorem", "3.1", write_params(block211_json)]) == EXIT_FAILED

    def test_kneg32a_names_the_balance_reading(self, write_params, block211_json, capsys):
        main(["verify", "--theorem", "3.3a", write_params(block211_json)])
        assert "alpha_balance: derived alpha reading" in capsys.readouterr().out

    def test_json_report(self, write_params, block211_json, capsys):
        assert main(["--format", "json", "verify", "--theorem", "3.4", write_params(block211_json)]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is True
        assert report["pipeline_k"] == 1

    def test_sampled_theorem(self, capsys):
        assert main(["verify", "--theorem", "3.1", "--count", "2", "--seed", "5"]) == EXIT_OK

    @pytest.mark.slow
    def test_cor_bound(self, capsys):
        assert main(["verify", "--theorem", "cor-bound", "--count", "4", "--seed", "2"]) == EXIT_OK
        assert "cor-bound" in capsys.readouterr().out

    @pytest.mark.slow
    def test_exhausted_search(self, monkeypatch, capsys):
        monkeypatch.setattr(CONFIG.search, "restarts", 3)
        assert main(["verify", "--theorem", "3.3a", "--count", "1"]) == EXIT_OK
        assert "exhausted" in capsys.readouterr().out


class TestSamplingCommands:
    """Tests for sample, scan and crosscheck"""

    def test_sample_round_trip(self, capsys):
        assert main(["sample", "--family", "General34", "--count", "2", "--seed", "4"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        expected = sample_family(FamilyKind.GENERAL34, 4, 2).instances
        assert [ParamsFile.model_validate_json(line).to_params() for line in lines] == expected

    @pytest.mark.slow
    def test_scan_is_reproducible(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scan", "--family", "ZeroK", "--count", "3", "--seed", "1"]
        assert main(["--output", str(first)] + args) == EXIT_OK
        assert main(["--output", str(second)] + args) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text().splitlines()
        assert lines[0] == ",".join(SCAN_HEADER)
        assert len(lines) == 4

    def test_crosscheck_refuses_float(self, write_params):
        path = write_params(_with(ZERO_JSON, s_prime=1.0, d_prime=[0, 0, 0, 0, 0, 0.5, 0]))
        assert main(["crosscheck", path]) == EXIT_INPUT

    def test_crosscheck_on_file(self, write_params, block211_json, capsys):
        code = main(["crosscheck", write_params(block211_json)])
        out = capsys.readouterr().out
        assert "mode K0" in out
        assert code in (EXIT_OK, EXIT_FAILED)


class TestRun:
    """Tests for run() with an explicit output stream"""

    def test_run_writes_to_stream(self, write_params, block211_json):
        out = io.StringIO()
        config = RunConfig(command="quantities", inputs=[write_params(block211_json)])
        assert run(config, out) == EXIT_OK
        assert "delta = 5/2" in out.getvalue()

    def test_command_without_files(self):
        assert run(RunConfig(command="curvature"), io.StringIO()) == EXIT_INPUT

    def test_tolerance_is_applied(self, write_params, block211_json):
        run(RunConfig(command="check", inputs=[write_params(block211_json)], tolerance=1e-6), io.StringIO())
        assert CONFIG.numerics.tolerance == 1e-6

    def test_missing_config(self, write_params, block211_json, tmp_path):
        path = write_params(block211_json)
        assert main(["--config", str(tmp_path / "absent.yaml"), "check", path]) == EXIT_INPUT
