"""
Tests for Equiform protocol models.
"""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from equiform_core.analysis import verify_theorem
from equiform_core.crosscheck import adjudicate, CoefficientRow, InstanceCoefficients
from equiform_core.motion import FamilyKind, MotionParams
from equiform_core.protocol import (
    CrosscheckReportModel, ParamsFile, RunConfig, TheoremReportModel,
)
from equiform_core.trigpoly import ScalarMode


def _file(**overrides):
    data = {"s_prime": 0, "omega": [0] * 21, "d_prime": [0] * 7}
    data.update(overrides)
    return data


def test_integers_are_exact():
    """An all-integer file is exact."""
    params_file = ParamsFile(**_file(s_prime=2))
    assert params_file.mode == "exact"
    assert params_file.to_params().s_prime == 2


def test_strings_are_rationals():
    params_file = ParamsFile(**_file(s_prime="-3/8"))
    assert params_file.to_params().s_prime == Fraction(-3, 8)


def test_float_forces_float_mode():
    """A single JSON float switches the whole file to float mode."""
    params_file = ParamsFile(**_file(s_prime=1.0))
    assert params_file.mode == "float"
    assert params_file.to_params().mode is ScalarMode.FLOAT


def test_mixed_strings_and_floats_rejected():
    with pytest.raises(ValidationError):
        ParamsFile(**_file(s_prime=1.0, d_prime=[0, 0, 0, "1/2", 0, 0, 0]))


def test_booleans_rejected():
    with pytest.raises(ValidationError):
        ParamsFile(**_file(s_prime=True))


def test_lengths_enforced():
    with pytest.raises(ValidationError):
        ParamsFile(**_file(omega=[0] * 20))


def test_forced_exact_mode():
    assert ParamsFile(**_file(s_prime=3.0)).to_params("exact").s_prime == 3
    with pytest.raises(ValueError):
        ParamsFile(**_file(s_prime=0.25)).to_params("exact")
    with pytest.raises(ValueError):
        ParamsFile(**_file()).to_params("decimal")


def test_from_params_round_trip():
    """Serializing and re-reading an exact instance gives it back."""
    p = MotionParams.build(Fraction(1, 3), {3: 2, 9: 2, 15: 2}, {6: Fraction(-5, 7)})
    params_file = ParamsFile.from_params(p)
    assert params_file.s_prime == "1/3"
    assert params_file.d_prime[5] == "-5/7"
    assert ParamsFile.model_validate_json(params_file.model_dump_json()).to_params() == p


def test_run_config_defaults():
    config = RunConfig(command="check")
    assert config.mode == "auto"
    assert config.format == "text"
    assert config.inputs == []


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(command="scan", count=0)
    with pytest.raises(ValidationError):
        RunConfig(command="check", tolerance=-1.0)
    with pytest.raises(ValidationError):
        RunConfig(command="curvature", method="numeric")


def test_theorem_report_model(block211):
    report = TheoremReportModel.from_report(verify_theorem(block211, FamilyKind.GENERAL34))
    assert report.theorem == "3.4"
    assert report.family == "General34"
    assert report.passed
    assert report.verdict == "constant K = 1"
    assert [label for label, _ in report.constraints][0] == "omega_1"


def test_crosscheck_report_model():
    row = CoefficientRow("X", "sin", ((0, 1),), (("only", lambda c: 0),))
    values = {"X": {((0, 1), "only"): (Fraction(3), Fraction(2))}}
    result = InstanceCoefficients(params=MotionParams.zero(), k=Fraction(-3, 2), values=values)
    model = CrosscheckReportModel.from_report(adjudicate([result], "general", Fraction(-3, 2), rows=[row]))
    assert model.k == "-3/2"
    assert model.rows[0].normalization == "3/2"
    assert model.rows[0].status == "match"
    assert model.passed
