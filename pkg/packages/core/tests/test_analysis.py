# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Tests for constancy decisions, theorem verification, sampled corollaries and
the finite-difference oracle.
"""

import math
from fractions import Fraction

import pytest

from equiform_core.analysis import (
    NECESSITY_RATE, THEOREMS, bound_scan, constancy, family_scan, fd_comparison, fd_curvature, k_formula,
    necessity_probe, predicted_curvature, residual_spectrum, verify_k6_infeasibility, verify_theorem,
)
from equiform_core.geometry import ChartPoleError, scalar_curvature
from equiform_core.motion import FamilyKind, MotionParams, PreconditionError
from equiform_core.sampling import sample_family
from equiform_core.trigpoly import TrigPoly, make_term

F = Fraction


@pytest.fixture
def non_constant():
    """omega_3 = omega_9 = omega_15 = 1, s' = 1, b'_4 = b'_6 = 1: alpha_6 = -1."""
    return MotionParams.build(1, {3: 1, 9: 1, 15: 1}, {4: 1, 6: 1})


class TestConstancy:
    """Tests for the constancy decision"""

    def test_exact_constant(self, block211):
        verdict = constancy(scalar_curvature(block211))
        assert verdict.constant
        assert verdict.k == 1 and isinstance(verdict.k, int)
        assert verdict.describe() == "constant K = 1"

    def test_exact_fraction(self):
        p = MotionParams.build(1, {3: 3, 9: 3, 15: 3}, {6: 1})
        verdict = constancy(scalar_curvature(p))
        assert verdict.constant
        assert verdict.k == k_formula(p) == F(16, 11)

    def test_non_constant(self, non_constant):
        verdict = constancy(scalar_curvature(non_constant))
        assert not verdict.constant
        assert verdict.k is None
        assert verdict.residual_spectrum
        assert verdict.describe().startswith("non-constant")

    def test_float_constant(self, sqrt10_instance):
        verdict = constancy(scalar_curvature(sqrt10_instance))
        assert verdict.constant
        assert verdict.k == pytest.approx(-1.5, abs=1e-9)

    def test_float_non_constant(self, non_constant):
        assert not constancy(scalar_curvature(non_constant.to_float())).constant

    def test_probe_on_pole(self, block211):
        with pytest.raises(ChartPoleError):
            constancy(scalar_curvature(block211), probe=(0.0, math.pi / 2))

    def test_residual_spectrum_order(self):
        tp = make_term((1, 0), "cos", F(1, 10)) + make_term((0, 2), "sin", 3) + TrigPoly.constant(-2)
        rows = residual_spectrum(tp)
        assert [row[0] for row in rows] == [(0, 2), (0, 0), (1, 0)]
        assert residual_spectrum(tp, limit=1) == rows[:1]


class TestKFormula:
    """Tests for K = 2(2 delta - beta - s'^2) / (beta + 2 delta)"""

    @pytest.mark.parametrize("fixture,k", [
        ("pure_scaling", 0), ("pure_rotation", 2), ("pure_translation", -2),
        ("block211", 1), ("block121", -1),
    ])
    def test_values(self, request, fixture, k):
        assert k_formula(request.getfixturevalue(fixture)) == k

    def test_sqrt10(self, sqrt10_instance):
        assert k_formula(sqrt10_instance) == pytest.approx(-1.5)

    def test_trivial_motion(self):
        with pytest.raises(PreconditionError):
            k_formula(MotionParams.zero())

    def test_predicted_curvature(self, block211, sqrt10_instance):
        assert predicted_curvature(block211, FamilyKind.ZERO_K) == 0
        assert predicted_curvature(block211, FamilyKind.K_NEG32_B) == F(-3, 2)
        assert predicted_curvature(sqrt10_instance, FamilyKind.K_NEG32_A) == -1.5
        assert predicted_curvature(block211, FamilyKind.GENERAL34) == 1
        with pytest.raises(ValueError):
            predicted_curvature(block211, FamilyKind.UNCONSTRAINED)


class TestVerifyTheorem:
    """Tests for single-instance theorem verification"""

    def test_theorem_ids(self):
        assert THEOREMS["3.1"] is FamilyKind.ZERO_K
        assert THEOREMS["3.4"] is FamilyKind.GENERAL34

    def test_zero_k(self, block111):
        report = verify_theorem(block111, FamilyKind.ZERO_K)
        assert report.passed
        assert report.pipeline_k == 0
        assert report.theorem == "3.1"
        assert report.constraint_residuals == [0] * 7

    def test_general34(self, block211):
        report = verify_theorem(block211, FamilyKind.GENERAL34)
        assert report.passed
        assert report.pipeline_k == report.predicted_k == 1

    def test_kneg32b(self, sqrt10_instance):
        report = verify_theorem(sqrt10_instance, FamilyKind.K_NEG32_B)
        assert report.passed, report.diagnostics
        assert report.pipeline_k == pytest.approx(-1.5)

    def test_failing_constraints(self, block111):
        report = verify_theorem(block111, FamilyKind.K_NEG32_B)
        assert not report.passed
        assert any("constraint residuals nonzero" in d for d in report.diagnostics)

    def test_precondition_failure_is_reported(self):
        report = verify_theorem(MotionParams.build(1, {3: 1}), FamilyKind.GENERAL34)
        assert not report.passed
        assert report.verdict is None
        assert any("precondition violated" in d for d in report.diagnostics)

    def test_non_constant_is_reported(self, non_constant):
        report = verify_theorem(non_constant, FamilyKind.GENERAL34)
        assert not report.passed
        assert report.verdict is not None and not report.verdict.constant

    def test_inert_parameters_are_noted(self):
        p = MotionParams.build(1, {3: 2, 9: 2, 15: 2, 16: 5}, {6: 1})
        report = verify_theorem(p, FamilyKind.GENERAL34)
        assert report.passed
        assert any("inert" in d for d in report.diagnostics)

    def test_unconstrained_is_rejected(self, block211):
        with pytest.raises(ValueError):
            verify_theorem(block211, FamilyKind.UNCONSTRAINED)

    @pytest.mark.parametrize("family", [FamilyKind.ZERO_K, FamilyKind.GENERAL34])
    def test_sampled_members_pass(self, family):
        for p in sample_family(family, 101, 3):
            report = verify_theorem(p, family)
            assert report.passed, report.diagnostics

    def test_spectral_method(self, block211):
        report = verify_theorem(block211, FamilyKind.GENERAL34, method="spectral")
        assert report.passed
        assert report.pipeline_k == pytest.approx(1.0)


@pytest.mark.slow
class TestCorollaries:
    """Tests for the sampled corollary checks"""

    def test_k6_infeasibility(self):
        stats = verify_k6_infeasibility(seed=0, n=8)
        assert stats.passed, stats.failures
        assert stats.requested == 8
        assert stats.count + len(stats.rejected) == 8
        assert all(abs(r.k + 6.0) > 1e-6 for r in stats.records if r.constant)

    def test_bound(self):
        stats = bound_scan(seed=1, n=6)
        assert stats.passed, stats.failures
        assert stats.constant_count == stats.count
        if stats.constant_count:
            assert -2.0 < stats.min_k <= stats.max_k < 2.0
            assert sum(stats.histogram[0]) == stats.constant_count
        assert any("pure rotation" in note for note in stats.observations)

    def test_family_scan(self):
        stats = family_scan(FamilyKind.ZERO_K, seed=2, n=4)
        assert stats.name == "scan-ZeroK"
        for rec in stats.records:
            if rec.status == "ok":
                assert rec.constant and rec.k == pytest.approx(0.0, abs=1e-9)

    def test_family_scan_is_deterministic(self):
        a = family_scan(FamilyKind.GENERAL34, seed=5, n=3)
        b = family_scan(FamilyKind.GENERAL34, seed=5, n=3)
        assert [r.k for r in a.records] == [r.k for r in b.records]

    def test_family_scan_rejects_kneg32a(self):
        with pytest.raises(ValueError):
            family_scan(FamilyKind.K_NEG32_A, seed=0, n=1)

    def test_necessity_probe(self):
        report = necessity_probe(seed=3, n=3)
        assert report.evaluated > 0
        # the omega_1 constraint alone rejects every perturbed instance
        assert report.detected == report.evaluated
        assert report.detected_by_pipeline + len(report.undetected) == report.evaluated
        assert report.rate == report.detected_by_pipeline / report.evaluated
        assert report.passed == (report.rate >= NECESSITY_RATE)

    def test_k6_infeasibility_full_count(self):
        stats = verify_k6_infeasibility(seed=0, n=1000)
        assert stats.passed, stats.failures[:5]
        assert stats.constant_count > 0

    def test_bound_full_count(self):
        stats = bound_scan(seed=7, n=10000)
        assert stats.passed, stats.failures[:5]
        assert -2.0 < stats.min_k <= stats.max_k < 2.0

    def test_necessity_full_count(self):
        report = necessity_probe(seed=3, n=100)
        assert report.passed, report.undetected
        assert report.rate >= NECESSITY_RATE


class TestFiniteDifferences:
    """Tests for the finite-difference curvature oracle"""

    @pytest.mark.parametrize("fixture,point,k", [
        ("pure_scaling", (0.7, 0.3), 0.0),
        ("pure_rotation", (1.0, 0.2), 2.0),
        ("block211", (0.3, -0.4), 1.0),
    ])
    def test_calibration(self, request, fixture, point, k):
        assert fd_curvature(request.getfixturevalue(fixture), *point) == pytest.approx(k, abs=1e-6)

    def test_random_instances(self):
        points = [(0.3, 0.2), (1.1, -0.4)]
        for p in sample_family(FamilyKind.UNCONSTRAINED, 13, 2):
            for _, _, symbolic, fd, deviation in fd_comparison(p, points):
                assert deviation <= 1e-5, (symbolic, fd)

    def test_near_pole(self, block211):
        with pytest.raises(ChartPoleError):
            fd_curvature(block211, 0.0, math.pi / 2 - 1e-5)

    def test_step_must_be_positive(self, block211):
        with pytest.raises(ValueError):
            fd_curvature(block211, 0.1, 0.1, h=0)
