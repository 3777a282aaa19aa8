"""Wavelet representations: series, closed form, continuation, multipole sum.

The four routes share no code beyond the coefficient tables, so pairwise
agreement is the main oracle; on top of that come the printed order-1 closed
form, the two order-lift recursions checked by finite differences, and the
filter normalizations.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poiswav import (
    DomainError,
    OffSpherePoint,
    SphereContext,
    WaveletSpec,
    eval_closed,
    eval_continuation,
    eval_multipole_sum,
    eval_series,
    evaluate,
    evaluate_all,
    filter_profile,
    flavor_scale,
    integrate_zonal,
    log_scale_grid,
    sphere_area,
)
from poiswav.wavelets import REPRESENTATIONS, closed_profile, expansion_about_origin, series_l_max

THETA = np.linspace(1e-3, math.pi, 60)
THETA_COS = np.cos(THETA)


def spec_for(n, m, a, flavor="raw"):
    return WaveletSpec(ctx=SphereContext(n), m=m, a=a, flavor=flavor)


class TestClosedForm:
    def test_printed_order_one_display(self):
        """n=2, a=2, t=1: (a r / Sigma_2) [(-5r + r^3) + (3 + r^2)] / (1-r)^5."""
        a = 2.0
        r = math.exp(-a)
        expected = (a * r / (4 * math.pi)) * ((-5 * r + r**3) + (3 + r**2)) / (1 - r) ** 5
        value = eval_closed(spec_for(2, 1, a), 1.0)
        assert value == pytest.approx(expected, rel=1e-14)

    def test_scalar_in_scalar_out(self):
        value = eval_closed(spec_for(3, 2, 0.5), 0.25)
        assert isinstance(value, float)

    def test_order_lift_in_r(self):
        # r d/dr h_m = h_(m+1) with the scale prefactor stripped
        ctx = SphereContext(3)
        r, h = 0.55, 1e-6
        t = np.linspace(-0.9, 0.9, 7)
        for m in (1, 2, 3):
            derivative = r * (closed_profile(ctx, m, r + h, t) - closed_profile(ctx, m, r - h, t)) / (2 * h)
            lifted = closed_profile(ctx, m + 1, r, t)
            assert derivative == pytest.approx(lifted, rel=1e-6)

    def test_order_lift_in_scale(self):
        # g^(m+1) = m g^m - a d/da g^m, central difference in a
        ctx = SphereContext(2)
        a, h = 0.8, 1e-5
        t = np.linspace(-0.95, 0.95, 9)
        for m in (1, 2):
            up = eval_closed(WaveletSpec(ctx=ctx, m=m, a=a + h), t)
            down = eval_closed(WaveletSpec(ctx=ctx, m=m, a=a - h), t)
            mid = eval_closed(WaveletSpec(ctx=ctx, m=m, a=a), t)
            lifted = m * mid - a * (up - down) / (2 * h)
            target = eval_closed(WaveletSpec(ctx=ctx, m=m + 1, a=a), t)
            assert lifted == pytest.approx(target, rel=1e-7)

    def test_rejects_degenerate_spec(self):
        ctx = SphereContext(2)
        with pytest.raises(DomainError):
            WaveletSpec(ctx=ctx, m=0, a=1.0)
        with pytest.raises(DomainError):
            WaveletSpec(ctx=ctx, m=1, a=0.0)
        with pytest.raises(DomainError):
            WaveletSpec(ctx=ctx, m=1, a=1.0, flavor="plain")


class TestCrossRepresentation:
    @pytest.mark.parametrize(
        "n,m,a",
        [(2, 1, 1.0), (3, 2, 0.1), (4, 3, 0.5), (2, 4, 2.0), (5, 2, 0.3)],
    )
    def test_four_way_spot_checks(self, n, m, a):
        res = evaluate_all(spec_for(n, m, a), THETA_COS)
        assert res["max_pairwise_rel_err"] < 1e-9

    def test_series_vs_closed_at_pole(self):
        spec = spec_for(2, 1, 1.0)
        assert eval_series(spec, 1.0) == pytest.approx(eval_closed(spec, 1.0), rel=1e-10)

    def test_series_vs_continuation(self):
        spec = spec_for(3, 2, 0.1)
        t = math.cos(math.pi / 3)
        assert eval_series(spec, t) == pytest.approx(eval_continuation(spec, t), rel=1e-9)

    def test_closed_vs_series_negative_pole(self):
        spec = spec_for(5, 2, 0.3)
        assert eval_multipole_sum(spec, -1.0) == pytest.approx(eval_closed(spec, -1.0), rel=1e-9)

    def test_continuation_matches_series_on_grid(self):
        spec = spec_for(2, 1, 1.0)
        theta = np.linspace(0.0, math.pi, 50)
        t = np.cos(theta)
        series = eval_series(spec, t)
        continuation = eval_continuation(spec, t)
        scale = np.max(np.abs(series))
        assert np.max(np.abs(series - continuation)) < 1e-9 * scale

    def test_continuation_point_form_matches_zonal_form(self):
        spec = spec_for(3, 2, 0.7)
        theta = 0.4
        by_t = eval_continuation(spec, math.cos(theta))
        by_point = eval_continuation(spec, point=OffSpherePoint(rho=1.0, theta=theta))
        assert by_point == pytest.approx(by_t, rel=1e-12)

    def test_expansion_about_origin_agrees_off_sphere(self):
        # outside the source radius the two continuation forms coincide
        spec = spec_for(3, 2, 0.7)
        point = OffSpherePoint(rho=1.5, theta=0.4)
        direct = eval_continuation(spec, point=point)
        expanded = expansion_about_origin(spec, math.cos(point.theta), rho=point.rho)
        assert expanded == pytest.approx(direct, rel=1e-10)

    def test_evaluate_dispatch(self):
        spec = spec_for(2, 2, 0.6)
        for name in REPRESENTATIONS:
            assert evaluate(spec, 0.3, representation=name) == pytest.approx(evaluate(spec, 0.3), rel=1e-9)
        with pytest.raises(DomainError):
            evaluate(spec, 0.3, representation="exact")

    def test_large_scale_decay(self):
        # r = e^-a kills every degree: |g| is dominated by the l=1 term
        spec = spec_for(2, 1, 30.0)
        envelope = 3.0 * (1 + 1) * 30.0 * math.exp(-30.0) / sphere_area(2)
        t = np.linspace(-1, 1, 11)
        assert np.max(np.abs(eval_series(spec, t))) <= envelope

    def test_series_l_max_monotone_in_tolerance(self):
        ctx = SphereContext(2)
        assert series_l_max(ctx, 1, 0.5, 1e-14) > series_l_max(ctx, 1, 0.5, 1e-6)


class TestFlavors:
    def test_scale_constants(self):
        ctx = SphereContext(2)
        assert flavor_scale(ctx, 1, "raw") == 1.0
        assert flavor_scale(ctx, 1, "bilinear") == pytest.approx(8 * math.pi, rel=1e-15)
        assert flavor_scale(ctx, 1, "linear") == pytest.approx(4 * math.pi, rel=1e-15)
        assert flavor_scale(ctx, 3, "bilinear") == pytest.approx(2**3 * sphere_area(2) / math.sqrt(math.gamma(6)), rel=1e-15)

    def test_flavored_evaluation_is_rescaled_raw(self):
        raw = eval_closed(spec_for(3, 2, 0.4, "raw"), 0.2)
        ctx = SphereContext(3)
        for flavor in ("bilinear", "linear"):
            flavored = eval_closed(spec_for(3, 2, 0.4, flavor), 0.2)
            assert flavored == pytest.approx(flavor_scale(ctx, 2, flavor) * raw, rel=1e-14)


class TestFilters:
    def test_vanish_at_zero(self):
        for m in (1, 2, 5):
            assert filter_profile("psi_m", m, 0.0) == 0.0
            assert filter_profile("gamma_m", m, 0.0) == 0.0

    def test_explicit_profiles(self):
        t = np.linspace(0.0, 12.0, 25)
        for m in (1, 2, 4):
            psi = 2.0**m / math.sqrt(math.gamma(2 * m)) * t**m * np.exp(-t)
            gam = t**m * np.exp(-t) / math.gamma(m)
            assert filter_profile("psi_m", m, t) == pytest.approx(psi, rel=1e-15)
            assert filter_profile("gamma_m", m, t) == pytest.approx(gam, rel=1e-15)

    def test_normalizations(self):
        grid = log_scale_grid(1e-6, 60.0, 2001)
        for m in (1, 2, 3, 4):
            energy = grid.integrate(filter_profile("psi_m", m, grid.nodes) ** 2)
            mass = grid.integrate(filter_profile("gamma_m", m, grid.nodes))
            assert energy == pytest.approx(1.0, abs=1e-9)
            # gamma_1's integrand tends to 1 in the dt measure, so truncating
            # below a_min costs exactly a_min; higher m decay fast enough
            assert mass == pytest.approx(1.0, abs=2e-6 if m == 1 else 1e-9)

    @given(t=st.floats(min_value=0.0, max_value=80.0), m=st.integers(min_value=1, max_value=6))
    @settings(max_examples=120, deadline=None)
    def test_nonnegative(self, t, m):
        assert filter_profile("psi_m", m, t) >= 0.0
        assert filter_profile("gamma_m", m, t) >= 0.0

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            filter_profile("psi_m", 0, 1.0)
        with pytest.raises(DomainError):
            filter_profile("psi_m", 1, -0.5)
        with pytest.raises(DomainError):
            filter_profile("box", 1, 1.0)


class TestZeroMean:
    @pytest.mark.parametrize("n,m,a", [(2, 1, 0.1), (2, 3, 1.0), (3, 2, 0.5), (4, 1, 2.0)])
    def test_integral_vanishes(self, n, m, a):
        ctx = SphereContext(n)
        spec = WaveletSpec(ctx=ctx, m=m, a=a)
        value = integrate_zonal(ctx, lambda t: eval_closed(spec, t), count=800)
        assert abs(value) < 1e-10
