"""Toeplitz solves: optimal weights, variance curves, quadratic forms."""

from __future__ import annotations

import math

import numpy as np
import pytest

import statmean as st
from statmean import ddouble as dd
from statmean.toeplitz import (INVERSE_DENSITY_CALIBRATION, _levinson_ones_dd,
                               reflection_coefficients)
from tests.conftest import dense_blue

TWO_PI = 2.0 * math.pi


class TestBlueSolve:
    def test_power_at_origin_order_two(self):
        weights, variance = st.blue_solve(st.system_for(st.PowerAtOrigin(1.0), 2))
        assert weights.coefficients == pytest.approx([0.3, 0.4, 0.3], abs=1e-13)
        assert variance == pytest.approx(0.2, rel=1e-13)
        assert weights.coefficients.sum() == pytest.approx(1.0, abs=1e-14)

    def test_white_noise_uniform(self, white_noise):
        for n in (0, 1, 9, 31):
            weights, variance = st.blue_solve(st.system_for(white_noise, n))
            assert np.allclose(weights.coefficients, 1.0 / (n + 1))
            assert variance == pytest.approx(1.0 / (n + 1), rel=1e-13)

    def test_ma1(self, ma1):
        weights, variance = st.blue_solve(st.system_for(ma1, 1))
        assert weights.coefficients == pytest.approx([0.5, 0.5])
        assert variance == pytest.approx(0.375, rel=1e-13)

    @pytest.mark.parametrize("alpha", [-0.4, -0.25, 0.25, 1.0, 2.0])
    @pytest.mark.parametrize("n", [3, 17, 64])
    def test_against_dense_oracle(self, alpha, n):
        cov = st.covariance_sequence(st.PowerAtOrigin(alpha), n)
        weights, variance = st.blue_solve(st.ToeplitzSystem(cov))
        wref, vref = dense_blue(cov.values, n)
        assert variance == pytest.approx(vref, rel=1e-10)
        assert np.max(np.abs(weights.coefficients - wref)) < 1e-10

    def test_condition_estimate_recorded(self, ma1):
        system = st.system_for(ma1, 16)
        st.blue_solve(system)
        assert system.condition_estimate is not None and system.condition_estimate >= 1.0

    def test_near_singular_raises_with_advice(self):
        cov = st.covariance_sequence(st.ArcSupported(math.pi / 2, 1.0 / TWO_PI), 40)
        with pytest.raises(st.NearSingularError) as err:
            st.blue_solve(st.ToeplitzSystem(cov))
        assert err.value.order > 4
        assert "double-double" in str(err.value)

    def test_dd_path_reaches_further(self):
        model = st.ArcSupported(math.pi / 2, 1.0 / TWO_PI)
        cov = st.covariance_sequence(model, 30, precision="dd")
        weights, variance = st.blue_solve(st.ToeplitzSystem(cov, precision="dd"))
        assert variance > 0
        assert weights.coefficients.sum() == pytest.approx(1.0, abs=1e-13)
        # oracle: solve the same system fully in double-double via the curve
        _, _, variances = _levinson_ones_dd(cov.dd_values, collect_curve=True)
        assert variance == pytest.approx(dd.to_float(variances[30]), rel=1e-12)


class TestVarianceCurve:
    def test_monotone_nonincreasing(self, ma1, ar1):
        for measure in (ma1, ar1, st.PowerAtOrigin(0.25), st.FgnDensity(0.75)):
            curve = st.blue_variance_curve(st.covariance_sequence(measure, 64))
            assert np.all(np.diff(curve) <= 1e-14)

    def test_monotone_in_density(self):
        base = st.Arma((1.0, -0.5))
        small = st.blue_variance_curve(st.covariance_sequence(base, 32))
        big = st.blue_variance_curve(st.covariance_sequence(st.Scaled(base, 1.3), 32))
        assert np.all(small <= big + 1e-12)
        f025 = st.blue_variance_curve(st.covariance_sequence(st.PowerAtOrigin(0.25), 32))
        f025_lifted = st.blue_variance_curve(
            st.covariance_sequence(st.Product(st.PowerAtOrigin(0.25),
                                              st.WhiteNoise(1.1 * TWO_PI / TWO_PI)), 32))
        assert np.all(f025 <= f025_lifted + 1e-12)

    def test_matches_per_order_solves(self, ar1):
        cov = st.covariance_sequence(ar1, 24)
        curve = st.blue_variance_curve(cov)
        for n in (0, 5, 17, 24):
            _, v = dense_blue(cov.values, n)
            assert curve[n] == pytest.approx(v, rel=1e-12)


class TestQuadraticForm:
    def test_uniform_weights_f1(self):
        cov = st.covariance_sequence(st.PowerAtOrigin(1.0), 2)
        value = st.quadratic_form(st.lse_weights(2), cov)
        assert value == pytest.approx(2.0 / 9.0, rel=1e-14)

    def test_blue_weights_reproduce_variance(self):
        system = st.system_for(st.PowerAtOrigin(1.0), 2)
        weights, variance = st.blue_solve(system)
        assert st.quadratic_form(weights, system.covariance) == pytest.approx(variance, rel=1e-12)

    def test_white_noise_is_sum_of_squares(self, white_noise):
        cov = st.covariance_sequence(white_noise, 5)
        rng = np.random.default_rng(7)
        c = rng.normal(size=6)
        c /= c.sum()
        from statmean.estimators import EstimatorWeights
        w = EstimatorWeights(c)
        assert st.quadratic_form(w, cov) == pytest.approx(float(np.dot(c, c)), rel=1e-12)

    def test_blue_variance_equals_quadratic_form_everywhere(self, ar1):
        for measure in (ar1, st.FgnDensity(0.7), st.PowerAtOrigin(-0.25)):
            system = st.system_for(measure, 24)
            weights, variance = st.blue_solve(system)
            assert st.quadratic_form(weights, system.covariance) == pytest.approx(
                variance, rel=1e-12)

    def test_long_weights_rejected(self):
        cov = st.covariance_sequence(st.WhiteNoise(1.0), 2)
        with pytest.raises(st.ValidationError):
            st.quadratic_form(st.lse_weights(5), cov)


class TestReflections:
    def test_magnitudes_below_one_for_nondeterministic(self, ma1):
        refl = reflection_coefficients(st.covariance_sequence(ma1, 32).values)
        assert np.all(np.abs(refl) < 1.0)

    def test_prediction_error_factorization(self, ar1):
        cov = st.covariance_sequence(ar1, 8)
        refl = reflection_coefficients(cov.values)
        sigma2 = cov.values[0] * np.prod(1.0 - refl ** 2)
        # one-step prediction error at order 8 via the orthogonal recursion
        state = st.szego_recursion(ar1, 8)
        assert sigma2 == pytest.approx(st.prediction_error(state, 8), rel=1e-12)


class TestInverseDensityApproximation:
    def test_white_noise_exact_anchor(self, white_noise):
        assert st.inverse_density_approx_variance(white_noise, 9) == pytest.approx(
            0.1, rel=1e-12)

    def test_calibration_constant_pinned(self):
        assert INVERSE_DENSITY_CALIBRATION == pytest.approx(1.0 / (TWO_PI * TWO_PI), rel=0)

    def test_ma1_close_to_true_variance(self, ma1):
        n = 4096
        approx = st.inverse_density_approx_variance(ma1, n)
        true = st.blue_variance_curve(st.covariance_sequence(ma1, n))[n]
        assert approx == pytest.approx(true, rel=0.03)

    def test_rejects_non_integrable_inverse(self):
        with pytest.raises(st.ValidationError):
            st.inverse_density_approx_variance(st.PowerAtOrigin(1.0), 16)
        with pytest.raises(st.ValidationError):
            st.inverse_density_approx_variance(st.ArcSupported(1.0, 1.0), 16)

    def test_approaches_short_memory_constant(self, ar1):
        n = 2048
        approx = st.inverse_density_approx_variance(ar1, n)
        limit = st.short_memory_variance_limit(ar1)
        assert n * approx == pytest.approx(limit, rel=0.01)
