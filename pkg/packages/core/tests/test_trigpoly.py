# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Tests for the trigonometric polynomial algebra.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equiform_core.spectral import grid_to_trigpoly
from equiform_core.trigpoly import (
    RationalTrig, ScalarMode, ScalarModeError, TPoly, TrigPoly, canonical_key, make_term,
)

F = Fraction
HALF = F(1, 2)

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=6)
tpolys = st.lists(fractions, max_size=3).map(TPoly)
keys = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
trigpolys = st.dictionaries(keys, st.tuples(tpolys, tpolys), max_size=4).map(
    lambda table: TrigPoly.from_table(table, ScalarMode.EXACT))
canonical_keys = st.one_of(st.tuples(st.integers(1, 4), st.integers(-4, 4)),
                          st.tuples(st.just(0), st.integers(0, 4)))
canonical_tables = st.dictionaries(canonical_keys, st.tuples(tpolys, tpolys), max_size=5)
angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)

# randomized algebra laws: a quick pass by default, the full 1000 cases under -m slow
ALGEBRA_EXAMPLES = pytest.mark.parametrize("examples", [100, pytest.param(1000, marks=pytest.mark.slow)])


def cos_theta():
    return make_term((1, 0), "cos", 1)


class TestMakeTerm:
    """Tests for single-term construction and key canonicalization"""

    def test_constant(self):
        assert make_term((0, 0), "cos", 1) == TrigPoly.constant(1)
        assert make_term((0, 0), "cos", 1).evaluate(0, 1.3, -0.2) == 1.0

    def test_negative_key_flips_sine(self):
        tp = make_term((-1, 2), "sin", 1)
        assert tp.keys() == [(1, -2)]
        c, s = tp.coefficient(1, -2)
        assert c.is_zero()
        assert s == TPoly((-1,))

    def test_sine_of_zero_frequency_vanishes(self):
        assert not make_term((0, 0), "sin", 5)

    def test_canonical_key(self):
        assert canonical_key(0, -3) == ((0, 3), -1)
        assert canonical_key(2, -1) == ((2, -1), 1)

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            make_term((1, 0), "tan", 1)


class TestArithmetic:
    """Tests for addition and the product-to-sum multiplication"""

    def test_additive_identity_and_inverse(self):
        p = cos_theta()
        assert p + TrigPoly.zero() == p
        assert not (p + (-p))
        assert p + p == make_term((1, 0), "cos", 2)

    def test_double_angle(self):
        expected = TrigPoly.from_table({(0, 0): (HALF, 0), (2, 0): (HALF, 0)})
        assert cos_theta() * cos_theta() == expected

    def test_product_to_sum(self):
        product = make_term((1, 0), "sin", 1) * make_term((0, 1), "cos", 1)
        expected = make_term((1, 1), "sin", HALF) + make_term((1, -1), "sin", HALF)
        assert product == expected

    def test_t_degree_adds(self):
        t_cos = make_term((1, 0), "cos", TPoly((0, 1)))
        square = t_cos * t_cos
        quadratic = TPoly((0, 0, HALF))
        assert square == TrigPoly.from_table({(0, 0): (quadratic, 0), (2, 0): (quadratic, 0)})
        assert square.t_degree == 2

    def test_doubled_product_keeps_integers(self):
        doubled = cos_theta().mul(cos_theta(), doubled=True)
        assert doubled == TrigPoly.from_table({(0, 0): (1, 0), (2, 0): (1, 0)})

    def test_t_degree_truncation(self):
        a = make_term((1, 0), "cos", TPoly((1, 1)))
        assert a.mul(a, t_degree=1).t_degree == 1

    def test_mixing_modes_is_rejected(self):
        exact = cos_theta()
        approx = make_term((1, 0), "cos", 1.0)
        with pytest.raises(ScalarModeError):
            exact + approx
        with pytest.raises(ScalarModeError):
            exact * approx
        with pytest.raises(ScalarModeError):
            exact.scale(0.5)

    @ALGEBRA_EXAMPLES
    def test_commutative(self, examples):
        @settings(max_examples=examples, deadline=None)
        @given(trigpolys, trigpolys)
        def check(a, b):
            assert a * b == b * a
            assert a + b == b + a
        check()

    @ALGEBRA_EXAMPLES
    def test_associative_and_distributive(self, examples):
        @settings(max_examples=examples, deadline=None)
        @given(trigpolys, trigpolys, trigpolys)
        def check(a, b, c):
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
        check()

    @ALGEBRA_EXAMPLES
    def test_leibniz_rule(self, examples):
        @settings(max_examples=examples, deadline=None)
        @given(trigpolys, trigpolys, st.sampled_from(["t", "theta", "phi"]))
        def check(a, b, var):
            assert (a * b).differentiate(var) == a.differentiate(var) * b + a * b.differentiate(var)
        check()

    @ALGEBRA_EXAMPLES
    def test_evaluation_is_multiplicative(self, examples):
        @settings(max_examples=examples, deadline=None)
        @given(trigpolys, trigpolys, fractions, angles, angles)
        def check(a, b, t, theta, phi):
            expected = a.evaluate(t, theta, phi) * b.evaluate(t, theta, phi)
            assert (a * b).evaluate(t, theta, phi) == pytest.approx(expected, abs=1e-9)
        check()


class TestCalculus:
    """Tests for differentiation, evaluation and t substitution"""

    def test_theta_derivative(self):
        assert make_term((1, 1), "sin", 1).differentiate("theta") == make_term((1, 1), "cos", 1)

    def test_t_derivative(self):
        tp = make_term((2, 0), "cos", TPoly((0, 0, 1)))
        assert tp.differentiate("t") == make_term((2, 0), "cos", TPoly((0, 2)))

    def test_phi_derivative_negative_frequency(self):
        assert make_term((2, -3), "cos", 1).differentiate("phi") == make_term((2, -3), "sin", 3)

    def test_unknown_variable(self):
        with pytest.raises(ValueError):
            cos_theta().differentiate("psi")

    def test_evaluate(self):
        assert cos_theta().evaluate(0, 0.0, 0.4) == pytest.approx(1.0)
        half_plus = TrigPoly.from_table({(0, 0): (HALF, 0), (2, 0): (HALF, 0)})
        assert half_plus.evaluate(0, math.pi / 4, 0.0) == pytest.approx(0.5)

    def test_substitute_t(self):
        tp = make_term((1, 0), "cos", TPoly((1, 2)))
        assert tp.substitute_t(0) == cos_theta()
        assert tp.substitute_t(1) == make_term((1, 0), "cos", 3)
        assert not make_term((0, 1), "sin", TPoly((0, 0, 1))).substitute_t(0)

    def test_evaluate_grid_matches_pointwise(self):
        tp = make_term((2, -1), "cos", F(3, 2)) + make_term((1, 3), "sin", -2) + TrigPoly.constant(1)
        n = 8
        grid = tp.evaluate_grid(n)
        for a in range(n):
            for b in range(n):
                value = tp.evaluate(0, 2 * math.pi * a / n, 2 * math.pi * b / n)
                assert grid[a, b] == pytest.approx(value, abs=1e-12)


class TestCoefficients:
    """Tests for coefficient extraction and zero tests"""

    def test_coefficient(self):
        tp = TrigPoly.from_table({(0, 0): (HALF, 0), (2, 0): (HALF, 0)})
        assert tp.coefficient(2, 0) == (TPoly((HALF,)), TPoly(()))
        assert tp.coefficient(0, 0) == (TPoly((HALF,)), TPoly(()))

    def test_coefficient_of_fresh_term(self):
        c, s = make_term((3, -5), "cos", F(7, 3)).coefficient(3, -5)
        assert c == TPoly((F(7, 3),)) and s.is_zero()

    @ALGEBRA_EXAMPLES
    def test_table_roundtrip(self, examples):
        @settings(max_examples=examples, deadline=None)
        @given(canonical_tables)
        def check(table):
            tp = TrigPoly.from_table(table, ScalarMode.EXACT)
            for (i, j), (c, s) in table.items():
                expected_sine = TPoly(()) if (i, j) == (0, 0) else s
                assert tp.coefficient(i, j) == (c, expected_sine)
                assert tp.coefficient(-i, -j) == (c, -expected_sine)
            assert all(key in table for key in tp.keys())
        check()

    def test_noncanonical_lookup(self):
        tp = make_term((1, -2), "sin", 4)
        assert tp.coefficient(-1, 2)[1] == TPoly((-4,))

    def test_is_zero(self):
        assert TrigPoly.zero().is_zero()
        assert (cos_theta() - cos_theta()).is_zero()
        assert not cos_theta().is_zero()

    def test_float_is_zero_uses_tolerance(self):
        tiny = make_term((1, 0), "cos", 1e-12)
        assert tiny.is_zero(scale=1.0, tol=1e-9)
        assert not tiny.is_zero(scale=1.0, tol=1e-15)

    def test_common_denominator_and_integral(self):
        tp = make_term((1, 0), "cos", F(1, 6)) + make_term((0, 2), "sin", F(3, 4))
        assert tp.common_denominator() == 12
        scaled = tp.integral(12)
        assert scaled == make_term((1, 0), "cos", 2) + make_term((0, 2), "sin", 9)
        with pytest.raises(ValueError):
            tp.integral(6)
        with pytest.raises(ScalarModeError):
            tp.to_float().integral(12)

    def test_spectrum_bound(self):
        tp = make_term((3, -5), "cos", 1) + make_term((1, 2), "sin", 1)
        assert tp.spectrum_bound() == (3, 5)


class TestRationalTrig:
    """Tests for quotients of trigonometric polynomials"""

    def test_quotient_rule(self):
        secant = RationalTrig(TrigPoly.constant(1), make_term((0, 1), "cos", 1))
        derivative = secant.differentiate("phi")
        phi = 0.3
        assert derivative.evaluate(0, 0.0, phi) == pytest.approx(math.sin(phi) / math.cos(phi) ** 2)

    def test_equality_by_cross_multiplication(self):
        cp = make_term((0, 1), "cos", 1)
        assert RationalTrig(cp * cp, cp).equals(RationalTrig(cp))

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalTrig(cos_theta(), TrigPoly.zero())


class TestSpectralRecovery:
    """Tests for recovering Fourier coefficients from grid samples"""

    def test_grid_to_trigpoly(self):
        tp = (make_term((2, -3), "cos", 1.5) + make_term((0, 4), "sin", -0.25)
              + make_term((5, 1), "sin", 2.0) + TrigPoly.constant(0.75, ScalarMode.FLOAT))
        recovered = grid_to_trigpoly(tp.evaluate_grid(16))
        assert recovered.keys() == tp.keys()
        for key in tp.keys():
            for got, want in zip(recovered.coefficient(*key), tp.coefficient(*key)):
                assert got(0) == pytest.approx(want(0), abs=1e-12)

    def test_rejects_rectangular_grid(self):
        with pytest.raises(ValueError):
            grid_to_trigpoly(np.zeros((4, 6)))
