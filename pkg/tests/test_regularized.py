import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barrier_lifetime import NonContracting, PotentialSpec, completeness
from barrier_lifetime.regularized import (
    AlphaSchedule,
    extrapolate_alpha,
    regularized_denominator,
    regularized_imaginary,
)

GRID = (0.0, -2.0, -4.0, -8.0, -16.0)


class TestSchedule:
    def test_defaults(self):
        s = AlphaSchedule()
        assert s.alphas == (0.2, 0.1, 0.05, 0.025) and s.window == 4

    @pytest.mark.parametrize("alphas", [(0.2, 0.1), (0.2, 0.2, 0.1), (0.1, 0.2, 0.05), (0.2, 0.1, 0.0)])
    def test_rejects(self, alphas):
        with pytest.raises(ValueError):
            AlphaSchedule(alphas=alphas)

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            AlphaSchedule(order=2)
        with pytest.raises(ValueError):
            AlphaSchedule(order=5)

    def test_halved(self):
        s = AlphaSchedule().halved()
        assert s.alphas[-1] == 0.0125 and s.window == 4


class TestExtrapolation:
    def test_constant(self):
        s = AlphaSchedule()
        limit, err = extrapolate_alpha([3.5] * 4, s)
        assert limit == pytest.approx(3.5, abs=1e-14) and err < 1e-14

    @settings(max_examples=50, deadline=None)
    @given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
    def test_polynomial_recovered(self, c0, c1, c2):
        s = AlphaSchedule()
        al = np.array(s.alphas)
        limit, _ = extrapolate_alpha(list(c0 + c1 * al + c2 * al**2), s)
        assert limit == pytest.approx(c0, abs=1e-12 * (1 + abs(c0) + abs(c1) + abs(c2)))

    def test_even_model(self):
        s = AlphaSchedule()
        al = np.array(s.alphas)
        limit, _ = extrapolate_alpha(list(2.0 + 5.0 * al**2), s)
        assert limit == pytest.approx(2.0, abs=1e-14)

    def test_growing_corrections(self):
        s = AlphaSchedule()
        with pytest.raises(NonContracting):
            # only the largest rate is off the constant: corrections 0, 0, 1/21
            extrapolate_alpha([1.0, 0.0, 0.0, 0.0], s)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            extrapolate_alpha([1.0, 2.0, 3.0], AlphaSchedule())


class TestDampedMoments:
    @pytest.mark.parametrize("v0a2", GRID)
    def test_increase_towards_limit(self, alpha_limits, moment_results, v0a2):
        for key, exact in (("den", moment_results[v0a2].denominator), ("num", moment_results[v0a2].numerator)):
            vals = alpha_limits[key][v0a2].values
            assert all(v > 0 for v in vals)
            assert all(b > a for a, b in zip(vals, vals[1:]))
            assert vals[-1] < exact * (1 + 1e-6)

    @pytest.mark.parametrize("v0a2", GRID)
    def test_laplace_bound(self, alpha_limits, v0a2):
        spec = PotentialSpec.from_v0a2(v0a2)
        dp_max = completeness(spec).value
        lim = alpha_limits["den"][v0a2]
        for al, val in zip(lim.alphas, lim.values):
            assert val <= dp_max / (al / spec.t0)

    @pytest.mark.parametrize("v0a2", GRID)
    def test_limit_within_error(self, alpha_limits, moment_results, v0a2):
        lim = alpha_limits["den"][v0a2]
        assert abs(lim.limit - moment_results[v0a2].denominator) <= 10 * lim.error + 1e-9 * lim.limit

    def test_resonance_needs_smaller_rates(self, alpha_limits):
        # the long-lived state at v0a2 = -2 forces the schedule past its listed rates
        assert len(alpha_limits["den"][-2.0].alphas) > 4
        assert len(alpha_limits["den"][-4.0].alphas) == 4

    def test_imaginary_part_vanishes(self):
        spec = PotentialSpec.from_v0a2(-4.0)
        im = regularized_imaginary(spec, 0.2)
        assert abs(im) < 1e-9 * regularized_denominator(spec, 0.2).value

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            regularized_denominator(PotentialSpec(), 0.0)

    def test_scaling(self):
        # alpha is measured in 1/t0, so the damped moment scales like t0
        d1 = regularized_denominator(PotentialSpec(a=1.0, v0=-4.0), 0.2).value
        d2 = regularized_denominator(PotentialSpec(a=2.0, v0=-1.0), 0.2).value
        assert d2 == pytest.approx(4 * d1, rel=1e-7)
        assert math.isfinite(d1)
