"""Gegenbauer evaluation, kernel dimensions, and sphere constants.

Oracles: explicit low-degree polynomial formulas, the binomial value at
t = 1, scipy's independent Gegenbauer implementation, and Gauss-Jacobi
orthogonality integrals.
"""

import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings, strategies as st

from poiswav import (
    InvalidContextError,
    SphereContext,
    gegenbauer,
    gegenbauer_at_one,
    gegenbauer_sequence,
    harmonic_dimension,
    reproducing_kernel,
    sphere_area,
)

LAMBDAS = [0.5, 1.0, 1.5, 2.0, 3.5]


def explicit_gegenbauer(lam, l, t):
    # closed forms up to degree 3, straight from the generating function
    if l == 0:
        return np.ones_like(np.asarray(t, dtype=float))
    if l == 1:
        return 2 * lam * t
    if l == 2:
        return 2 * lam * (lam + 1) * t**2 - lam
    if l == 3:
        return (4.0 / 3.0) * lam * (lam + 1) * (lam + 2) * t**3 - 2 * lam * (lam + 1) * t
    raise ValueError(l)


class TestSphereArea:
    def test_frozen_values(self):
        assert sphere_area(2) == pytest.approx(12.566370614359172, rel=1e-15)
        assert sphere_area(3) == pytest.approx(19.739208802178716, rel=1e-15)
        assert sphere_area(4) == pytest.approx(26.31894506957162, rel=1e-15)

    def test_closed_forms(self):
        assert sphere_area(2) == pytest.approx(4 * math.pi, rel=1e-15)
        assert sphere_area(3) == pytest.approx(2 * math.pi**2, rel=1e-15)
        assert sphere_area(4) == pytest.approx(8 * math.pi**2 / 3, rel=1e-15)

    def test_circle(self):
        assert sphere_area(1) == pytest.approx(2 * math.pi, rel=1e-15)


class TestContext:
    def test_lambda_and_areas(self):
        ctx = SphereContext(3)
        assert ctx.lam == 1.0
        assert ctx.sigma_n == pytest.approx(sphere_area(3), rel=1e-15)
        assert ctx.sigma_n_minus_1 == pytest.approx(sphere_area(2), rel=1e-15)

    @pytest.mark.parametrize("bad", [1, 0, -2])
    def test_rejects_low_dimension(self, bad):
        with pytest.raises(InvalidContextError):
            SphereContext(bad)


class TestGegenbauer:
    def test_degree_zero_is_one(self):
        assert gegenbauer(1.0, 0, 0.3) == 1.0

    def test_frozen_points(self):
        assert gegenbauer(1.0, 1, 0.5) == pytest.approx(1.0, abs=1e-15)
        assert gegenbauer(1.0, 2, 1.0) == pytest.approx(3.0, rel=1e-14)

    @pytest.mark.parametrize("lam", LAMBDAS)
    @pytest.mark.parametrize("l", [0, 1, 2, 3])
    def test_low_degree_closed_forms(self, lam, l):
        t = np.linspace(-1.0, 1.0, 17)
        expected = explicit_gegenbauer(lam, l, t)
        assert gegenbauer(lam, l, t) == pytest.approx(expected, rel=1e-13, abs=1e-13)

    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_matches_scipy(self, lam):
        t = np.linspace(-1.0, 1.0, 23)
        for l in range(9):
            mine = gegenbauer(lam, l, t)
            ref = scipy.special.eval_gegenbauer(l, lam, t)
            assert np.max(np.abs(mine - ref)) < 1e-11 * max(1.0, gegenbauer_at_one(lam, l))

    def test_sequence_consistent_with_single(self):
        t = np.linspace(-1.0, 1.0, 11)
        seq = gegenbauer_sequence(1.5, 6, t)
        assert seq.shape == (7, 11)
        for l in range(7):
            assert seq[l] == pytest.approx(gegenbauer(1.5, l, t), rel=1e-14, abs=1e-14)

    def test_accepts_context(self):
        ctx = SphereContext(4)  # lam = 3/2
        t = 0.25
        assert gegenbauer(ctx, 2, t) == pytest.approx(gegenbauer(1.5, 2, t), rel=1e-15)

    @given(
        lam=st.sampled_from(LAMBDAS),
        l=st.integers(min_value=0, max_value=14),
        t=st.floats(min_value=-1.0, max_value=1.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_bounded_by_value_at_one(self, lam, l, t):
        # |C_l(t)| <= C_l(1) on [-1, 1] for lam > 0
        assert abs(gegenbauer(lam, l, t)) <= gegenbauer_at_one(lam, l) * (1 + 1e-12)

    @given(l=st.integers(min_value=1, max_value=14), lam=st.sampled_from(LAMBDAS))
    @settings(max_examples=60, deadline=None)
    def test_parity(self, l, lam):
        t = 0.37
        sign = (-1.0) ** l
        assert gegenbauer(lam, l, -t) == pytest.approx(sign * gegenbauer(lam, l, t), rel=1e-12, abs=1e-12)


class TestValueAtOne:
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_binomial_formula(self, lam):
        for l in range(10):
            expected = scipy.special.binom(l + 2 * lam - 1, l)
            assert gegenbauer_at_one(lam, l) == pytest.approx(expected, rel=1e-13)

    def test_consistent_with_evaluation(self):
        for lam in LAMBDAS:
            for l in range(8):
                assert gegenbauer(lam, l, 1.0) == pytest.approx(gegenbauer_at_one(lam, l), rel=1e-12)


class TestHarmonicDimension:
    def test_frozen(self):
        assert harmonic_dimension(2, 0) == 1
        assert harmonic_dimension(2, 2) == 5
        assert harmonic_dimension(3, 1) == 4

    def test_circle_harmonics_n2(self):
        # on S^2 the degree-l space has dimension 2l+1
        for l in range(12):
            assert harmonic_dimension(2, l) == 2 * l + 1

    def test_counting_formula(self):
        # dim = C(n+l, l) - C(n+l-2, l-2), homogeneous harmonic polynomials
        for n in range(2, 7):
            for l in range(10):
                full = math.comb(n + l, l)
                lower = math.comb(n + l - 2, l - 2) if l >= 2 else 0
                assert harmonic_dimension(n, l) == full - lower

    def test_kernel_at_one_counts_harmonics(self):
        # ((lam+l)/lam) C_l(1) is an integer equal to the harmonic dimension
        for n in range(2, 7):
            ctx = SphereContext(n)
            for l in range(12):
                value = reproducing_kernel(ctx, l, 1.0)
                assert value == pytest.approx(harmonic_dimension(n, l), rel=1e-12)


class TestOrthogonality:
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_gram_matrix(self, lam):
        """<C_k, C_l> with weight (1-t^2)^(lam-1/2) is diagonal with the
        classical norm pi 2^(1-2 lam) Gamma(l+2 lam) / (l! (l+lam) Gamma(lam)^2)."""
        nodes, weights = scipy.special.roots_jacobi(60, lam - 0.5, lam - 0.5)
        seq = gegenbauer_sequence(lam, 6, nodes)
        gram = (seq * weights) @ seq.T
        for k in range(7):
            for l in range(7):
                if k != l:
                    assert abs(gram[k, l]) < 1e-12 * math.sqrt(gram[k, k] * gram[l, l])
                else:
                    expected = (
                        math.pi
                        * 2.0 ** (1 - 2 * lam)
                        * math.gamma(l + 2 * lam)
                        / (math.factorial(l) * (l + lam) * math.gamma(lam) ** 2)
                    )
                    assert gram[l, l] == pytest.approx(expected, rel=1e-12)
