"""Minimax polynomials on arc regions and variance-decay diagnostics."""

from __future__ import annotations

import math

import numpy as np
import pytest

import statmean as st
from statmean.deterministic import ArcRegion

COS_BOUND = math.cos(math.pi / 4)


class TestArcRegion:
    def test_normalization_merges_overlaps(self):
        region = ArcRegion(((0.0, 1.0), (0.5, 2.0), (-3.0, -2.5)))
        assert region.arcs == ((-3.0, -2.5), (0.0, 2.0))

    def test_contains_one_flag(self):
        assert ArcRegion(((-0.5, 0.5),)).contains_one
        assert not ArcRegion.complement_arc(math.pi / 2).contains_one

    def test_validation(self):
        with pytest.raises(st.ValidationError):
            ArcRegion(((2.0, 1.0),))
        with pytest.raises(st.ValidationError):
            ArcRegion.complement_arc(0.0)

    def test_grid_stays_inside(self):
        region = ArcRegion.complement_arc(1.0)
        grid = region.grid(1000)
        assert np.all((np.abs(grid) >= 1.0) & (np.abs(grid) <= math.pi))


class TestChebyshevMinMax:
    def test_full_circle_deviation_is_one(self):
        for n in (2, 8, 16):
            sol = st.chebyshev_min_max(ArcRegion.full_circle(), n)
            assert sol.deviation == pytest.approx(1.0, abs=1e-4)
            assert sol.constant_estimate == pytest.approx(1.0, abs=1e-3)

    def test_arcs_containing_one_stay_near_one(self):
        region = ArcRegion(((-1.0, 1.0),))
        sol = st.chebyshev_min_max(region, 64)
        assert sol.constant_estimate == pytest.approx(1.0, abs=0.02)
        # discretization can shave O((n/M)^2) off the continuum value 1
        assert sol.constant_estimate >= 1.0 - 5e-4

    def test_value_one_at_unit_point(self):
        sol = st.chebyshev_min_max(ArcRegion.complement_arc(1.0), 12)
        assert sol(1.0) == pytest.approx(1.0, abs=1e-10)

    def test_explicit_candidate_certifies_bound(self):
        """((z+1)/2)^n has modulus cos(lam/2)^n; the solver must do at least as well."""
        region = ArcRegion.complement_arc(math.pi / 2)
        for n in (2, 4, 8, 16, 32):
            sol = st.chebyshev_min_max(region, n)
            assert sol.deviation <= COS_BOUND ** n + 1e-9
        sol4 = st.chebyshev_min_max(region, 4)
        assert sol4.deviation <= 0.25

    def test_monotone_set_function(self):
        inner = ArcRegion.complement_arc(2.0)
        outer = ArcRegion.complement_arc(1.0)
        for n in (4, 12):
            dev_inner = st.chebyshev_min_max(inner, n).deviation
            dev_outer = st.chebyshev_min_max(outer, n).deviation
            assert dev_inner <= dev_outer + 1e-9

    def test_non_convergence_reports_upper_bound(self):
        region = ArcRegion.complement_arc(math.pi / 2)
        sol = st.chebyshev_min_max(region, 24)
        # whether or not the loop converged, the deviation is a real max-modulus
        grid = region.grid(20000)
        vals = np.abs(np.polynomial.polynomial.polyval(np.exp(1j * grid), sol.coefficients))
        assert vals.max() <= sol.deviation * (1.0 + 1e-6) + 1e-12


class TestChebyshevConstant:
    def test_full_circle(self):
        tau, _ = st.chebyshev_constant_estimate(ArcRegion.full_circle(), (4, 8, 12))
        assert tau == pytest.approx(1.0, abs=1e-3)

    def test_complement_arc_bounds(self):
        tau, curve = st.chebyshev_constant_estimate(
            ArcRegion.complement_arc(math.pi / 2), range(8, 25, 4))
        assert tau <= COS_BOUND + 0.02
        seq = [c.constant_estimate for c in curve]
        assert max(seq) - min(seq[len(seq) // 2:]) <= 0.05   # bounded oscillation

    def test_wider_gap_decays_faster(self):
        tau, _ = st.chebyshev_constant_estimate(
            ArcRegion.complement_arc(2 * math.pi / 3), range(8, 21, 4))
        assert tau <= math.cos(math.pi / 3) + 0.02


class TestDecayRate:
    def test_arc_supported_matches_minimax_constant(self):
        measure = st.ArcSupported(math.pi / 2, 1.0 / (2 * math.pi))
        report = st.decay_rate_from_variances(measure, range(8, 97, 8))
        assert report.neutrality == "ExponentiallyDecreasing"
        assert report.precision == "dd"
        assert report.warning is not None           # grid truncation expected
        assert report.rho <= COS_BOUND + 0.02
        tau, _ = st.chebyshev_constant_estimate(
            ArcRegion.complement_arc(math.pi / 2), range(8, 33, 4))
        assert abs(report.rho - tau) <= 0.03

    def test_hyperbolic_models_are_neutral(self):
        for alpha in (1.0, 2.0):
            report = st.decay_rate_from_variances(st.PowerAtOrigin(alpha), range(8, 97, 8))
            assert report.neutrality == "ExponentiallyNeutral"
            ratios = report.sigmas[1:] / report.sigmas[:-1]
            assert np.all(np.diff(ratios) > 0)       # climbing toward 1

    def test_flat_zero_neutral_on_reachable_grid(self):
        report = st.decay_rate_from_variances(st.FlatZero(1.5), range(16, 129, 16),
                                              precision="auto")
        assert report.neutrality == "ExponentiallyNeutral"
        assert report.precision == "dd"

    def test_forced_double_truncates_with_warning(self):
        measure = st.ArcSupported(math.pi / 2, 1.0 / (2 * math.pi))
        report = st.decay_rate_from_variances(measure, range(4, 41, 4), precision="double")
        assert report.warning is not None
        assert report.orders[-1] < 40
        assert report.rho == pytest.approx(0.414, abs=0.05)
