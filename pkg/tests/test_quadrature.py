"""Gauss-Gegenbauer rules, the logarithmic scale grid, and zonal integrals."""

import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings, strategies as st

from poiswav import (
    SphereContext,
    convolve_zonal,
    gauss_gegenbauer,
    gauss_jacobi,
    gegenbauer,
    integrate_zonal,
    log_scale_grid,
    sphere_area,
)
from poiswav.wavelets import filter as filter_profile


def weight_total(lam):
    # int_{-1}^{1} (1-t^2)^(lam-1/2) dt
    return math.sqrt(math.pi) * math.gamma(lam + 0.5) / math.gamma(lam + 1.0)


class TestGaussGegenbauer:
    def test_single_node_legendre(self):
        rule = gauss_gegenbauer(0.5, 1)
        assert rule.nodes == pytest.approx([0.0], abs=1e-15)
        assert rule.weights == pytest.approx([2.0], rel=1e-15)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 1.5, 2.5])
    @pytest.mark.parametrize("count", [4, 17, 80])
    def test_weight_sum(self, lam, count):
        rule = gauss_gegenbauer(lam, count)
        assert np.sum(rule.weights) == pytest.approx(weight_total(lam), rel=1e-14)
        assert rule.total_weight_exact == pytest.approx(weight_total(lam), rel=1e-15)

    def test_legendre_moment(self):
        # int t^2 dt = 2/3
        rule = gauss_gegenbauer(0.5, 40)
        assert rule.integrate(rule.nodes**2) == pytest.approx(2.0 / 3.0, abs=1e-14)

    def test_chebyshev_like_moment(self):
        # int t^2 (1-t^2)^(1/2) dt = pi/8
        rule = gauss_gegenbauer(1.0, 20)
        assert rule.integrate(lambda t: t**2) == pytest.approx(math.pi / 8.0, abs=1e-14)

    def test_matches_numpy_legendre(self):
        # lam = 1/2 is plain Legendre weight
        rule = gauss_gegenbauer(0.5, 24)
        ref_nodes, ref_weights = np.polynomial.legendre.leggauss(24)
        assert rule.nodes == pytest.approx(ref_nodes, abs=1e-13)
        assert rule.weights == pytest.approx(ref_weights, abs=1e-13)

    @given(k=st.integers(min_value=0, max_value=16), lam=st.sampled_from([0.5, 1.0, 2.0]))
    @settings(max_examples=60, deadline=None)
    def test_monomial_moments(self, k, lam):
        """Even moments against the Beta-function formula, odd moments vanish."""
        rule = gauss_gegenbauer(lam, 30)  # exact through degree 59
        value = rule.integrate(rule.nodes ** k)
        if k % 2 == 1:
            assert abs(value) < 1e-14
        else:
            expected = scipy.special.beta((k + 1) / 2.0, lam + 0.5)
            assert value == pytest.approx(expected, rel=1e-13)

    def test_gauss_jacobi_passthrough(self):
        nodes, weights = gauss_jacobi(0.5, 0.5, 12)
        ref_n, ref_w = scipy.special.roots_jacobi(12, 0.5, 0.5)
        assert nodes == pytest.approx(ref_n, abs=1e-14)
        assert weights == pytest.approx(ref_w, abs=1e-14)


class TestScaleGrid:
    def test_constant_integrates_to_log_ratio(self):
        grid = log_scale_grid(1e-3, 30.0, 200)
        # trapezoid weights on a constant are exact
        assert grid.integrate(np.ones(grid.count)) == pytest.approx(math.log(30.0 / 1e-3), rel=1e-14)

    def test_gamma_integral(self):
        # int a e^{-a} da/a over [a_min, a_max]; the grid must hit the
        # truncated analytic value to 1e-6 (the truncation itself costs
        # ~a_min = 1e-3 relative to Gamma(1) = 1, so the full-line value
        # is only a loose sanity bound here)
        grid = log_scale_grid(1e-3, 30.0, 200)
        truncated = math.exp(-1e-3) - math.exp(-30.0)
        value = grid.integrate(lambda a: a * np.exp(-a))
        assert value == pytest.approx(truncated, abs=1e-6)
        assert value == pytest.approx(1.0, abs=2e-3)

    def test_normalized_filter_energy(self):
        # int psi_1(a)^2 da/a = 1
        grid = log_scale_grid(1e-4, 50.0, 400)
        value = grid.integrate(filter_profile("psi_m", 1, grid.nodes) ** 2)
        assert value == pytest.approx(1.0, abs=1e-6)

    def test_higher_order_gamma_scale_integral(self):
        # int (al)^(2m) e^(-2al) da/a = Gamma(2m)/4^m, independent of l
        grid = log_scale_grid(1e-6, 80.0, 2501)
        for m in (1, 2, 3):
            for l in (1.0, 4.0):
                value = grid.integrate((grid.nodes * l) ** (2 * m) * np.exp(-2.0 * grid.nodes * l))
                assert value == pytest.approx(math.gamma(2 * m) / 4.0**m, rel=1e-9)

    def test_nodes_are_geometric(self):
        grid = log_scale_grid(0.1, 10.0, 21)
        ratios = grid.nodes[1:] / grid.nodes[:-1]
        assert ratios == pytest.approx(np.full(20, ratios[0]), rel=1e-12)
        assert grid.a_min == 0.1 and grid.a_max == 10.0 and grid.count == 21


class TestZonalIntegrals:
    def test_total_measure(self):
        for n in (2, 3, 4):
            ctx = SphereContext(n)
            assert integrate_zonal(ctx, lambda t: np.ones_like(t)) == pytest.approx(sphere_area(n), rel=1e-12)

    def test_degree_components_integrate_to_zero(self):
        ctx = SphereContext(3)
        for l in (1, 2, 5):
            value = integrate_zonal(ctx, lambda t, l=l: gegenbauer(ctx, l, t))
            assert abs(value) < 1e-12

    def test_convolution_is_degree_diagonal(self):
        """Convolving two single-degree zonal functions rescales the shared
        degree by lam/(lam+l) and kills everything else."""
        ctx = SphereContext(3)  # lam = 1
        lam = ctx.lam
        t_out = np.linspace(-1.0, 1.0, 9)
        for l in (1, 2, 4):
            conv = convolve_zonal(
                ctx,
                lambda t, l=l: gegenbauer(ctx, l, t),
                lambda t, l=l: gegenbauer(ctx, l, t),
                t_out,
            )
            expected = lam / (lam + l) * gegenbauer(ctx, l, t_out)
            assert conv == pytest.approx(expected, abs=1e-10)

    def test_convolution_of_distinct_degrees_vanishes(self):
        ctx = SphereContext(2)
        t_out = np.linspace(-1.0, 1.0, 7)
        conv = convolve_zonal(
            ctx,
            lambda t: gegenbauer(ctx, 1, t),
            lambda t: gegenbauer(ctx, 3, t),
            t_out,
        )
        assert np.max(np.abs(conv)) < 1e-10
