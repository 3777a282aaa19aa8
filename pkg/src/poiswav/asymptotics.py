"""Euclidean (zooming) limits and localization statistics.

Under the rescaled stereographic chart theta = 2 arctan(a s / 2) the blown-up
wavelets a^n g_a^m converge pointwise, as a -> 0, to radial profiles

    g^m(s) = (1/(Sigma_n lambda)) (m+1)! C_{m+1}^lambda(1/sqrt(1+s^2))
             / (1+s^2)^((m+n)/2),

which decay polynomially with degree m + n + ((m+1) mod 2) and have exact
zero mean against the flat radial measure s^(n-1) ds (substituting
u = 1/sqrt(1+s^2) turns the mean into a Gegenbauer orthogonality integral).

The localization statistics quantify the uniform bounds: e^a-normalized
suprema of |g_a^m| against powers of the colatitude, swept over scale grids,
with +-0.25 exponent probes to exhibit minimality of the stable exponents.
All statistics use the raw flavor; the flavored versions differ by the exact
constant flavor_scale only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import gauss_gegenbauer
from .special_functions import SphereContext, gegenbauer
from .wavelets import WaveletSpec, eval_closed

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# the limiting profiles
# ---------------------------------------------------------------------------


def euclidean_limit(ctx: SphereContext, m: int, s):
    """Radial limit profile g^m(s), s = |xi| >= 0."""
    if m < 1:
        raise DomainError(f"order must be >= 1, got {m}")
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 0.0):
        raise DomainError("s must be nonnegative")
    one_plus = 1.0 + s_arr * s_arr
    u = 1.0 / np.sqrt(one_plus)
    value = (
        math.factorial(m + 1)
        / (ctx.sigma_n * ctx.lam)
        * gegenbauer(ctx.lam, m + 1, u)
        / one_plus ** (0.5 * (m + ctx.n))
    )
    return float(value[0]) if np.ndim(s) == 0 else value


@dataclass(frozen=True)
class EuclideanProfile:
    """Callable wrapper for g^m with its decay degree."""

    ctx: SphereContext
    m: int

    def __call__(self, s):
        return euclidean_limit(self.ctx, self.m, s)

    @property
    def decay_degree(self) -> int:
        # odd m+1 Gegenbauer vanishes at 0, adding one power of 1/s
        return self.m + self.ctx.n + ((self.m + 1) % 2)


def stereographic_colatitude(s, convention: str = "half"):
    """Colatitude of the inverse stereographic image of a point at radius s.

    The default tan(theta/2) = s/2 convention is the one whose pullback of
    sin^(2 lambda) theta d theta is exactly the flat-limit measure
    4 (4s)^(2 lambda) / (4+s^2)^(2 lambda + 1) ds; the tan(theta/2) = s
    alternative is kept for the convergence report's fallback path.
    """
    s_arr = np.asarray(s, dtype=float)
    if convention == "half":
        return 2.0 * np.arctan(0.5 * s_arr)
    if convention == "full":
        return 2.0 * np.arctan(s_arr)
    raise DomainError(f"unknown convention {convention!r}")


def flat_measure_density(ctx: SphereContext, s):
    """d nu / ds = 4 (4s)^(2 lambda) / (4 + s^2)^(2 lambda + 1)."""
    s_arr = np.asarray(s, dtype=float)
    two_lam = ctx.n - 1
    return 4.0 * (4.0 * s_arr) ** two_lam / (4.0 + s_arr * s_arr) ** (two_lam + 1)


def pullback_residual(ctx: SphereContext, s) -> np.ndarray:
    """|sin^(2 lambda) theta(s) * theta'(s) - d nu/ds|; zero up to rounding."""
    s_arr = np.asarray(s, dtype=float)
    theta = stereographic_colatitude(s_arr)
    dtheta_ds = 4.0 / (4.0 + s_arr * s_arr)
    return np.abs(np.sin(theta) ** (ctx.n - 1) * dtheta_ds - flat_measure_density(ctx, s_arr))


def decay_slope(ctx: SphereContext, m: int, s_lo: float = 1e2, s_hi: float = 1e4) -> float:
    """Two-point log-log slope of |g^m| over [s_lo, s_hi]."""
    g_lo = abs(euclidean_limit(ctx, m, s_lo))
    g_hi = abs(euclidean_limit(ctx, m, s_hi))
    return math.log(g_hi / g_lo) / math.log(s_hi / s_lo)


# ---------------------------------------------------------------------------
# convergence of the blow-ups
# ---------------------------------------------------------------------------


def _blowup_error(ctx: SphereContext, m: int, a: float, s_grid: np.ndarray, convention: str) -> float:
    spec = WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw")
    theta = stereographic_colatitude(a * s_grid, convention=convention)
    rescaled = a**ctx.n * eval_closed(spec, np.cos(theta))
    return float(np.max(np.abs(rescaled - euclidean_limit(ctx, m, s_grid))))


def euclidean_convergence_report(ctx: SphereContext, m: int, a_list=None, s_grid=None) -> dict:
    """Sup-error of a^n g_a^m against g^m along a decreasing scale list.

    Errors must decrease monotonically; if they do not under the default
    chart, the alternate tan(theta/2) = s chart is tried and both tables are
    reported, together with which convention (if any) converged.
    """
    if a_list is None:
        a_list = (0.04, 0.02, 0.01, 0.005)
    a_list = [float(a) for a in a_list]
    if any(a < 1e-3 for a in a_list):
        raise DomainError("scales below 1e-3 are outside the supported range")
    if any(b >= a for a, b in zip(a_list, a_list[1:])):
        raise DomainError("a_list must be strictly decreasing")
    if s_grid is None:
        s_grid = np.concatenate([[0.0], np.geomspace(1e-2, 50.0, 400)])
    s_grid = np.asarray(s_grid, dtype=float)

    profile_sup = float(np.max(np.abs(euclidean_limit(ctx, m, s_grid))))
    errors = [_blowup_error(ctx, m, a, s_grid, "half") for a in a_list]
    monotone = all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
    report = {
        "schema_version": SCHEMA_VERSION,
        "m": m,
        "n": ctx.n,
        "a_list": a_list,
        "sup_errors": errors,
        "profile_sup": profile_sup,
        "relative_errors": [e / profile_sup for e in errors],
        "monotone": monotone,
        "convention": "half",
        "fallback_tried": False,
    }
    orders = [
        math.log(e1 / e2) / math.log(a1 / a2)
        for (a1, e1), (a2, e2) in zip(zip(a_list, errors), zip(a_list[1:], errors[1:]))
        if e1 > 0 and e2 > 0
    ]
    report["empirical_orders"] = orders
    if not monotone:
        alt = [_blowup_error(ctx, m, a, s_grid, "full") for a in a_list]
        report["fallback_tried"] = True
        report["sup_errors_full_convention"] = alt
        alt_monotone = all(e2 < e1 for e1, e2 in zip(alt, alt[1:]))
        report["monotone_full_convention"] = alt_monotone
        report["convention"] = "full" if alt_monotone else "none"
    return report


# ---------------------------------------------------------------------------
# localization statistics
# ---------------------------------------------------------------------------


def _growth_exponent(a_values: np.ndarray, stats: np.ndarray) -> float:
    """Least-squares slope of log(stat) against log(a)."""
    x = np.log(np.asarray(a_values, dtype=float))
    y = np.log(np.asarray(stats, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def _sup_stat_i(ctx, m, a, k, theta_count) -> float:
    spec = WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw")
    theta = np.geomspace(a / 100.0, math.pi, theta_count)
    vals = np.abs(eval_closed(spec, np.cos(theta))) * theta**k
    return float(np.max(vals)) * math.exp(a) / a**m


def _sup_stat_ii(ctx, m, a, exponent, theta_count) -> float:
    spec = WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw")
    u = np.geomspace(1e-3, math.pi / a, theta_count)
    vals = np.abs(eval_closed(spec, np.cos(a * u))) * u**exponent
    return float(np.max(vals)) * a**ctx.n * math.exp(a)


def _sup_stat_iii(ctx, m, a, theta_count):
    spec = WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw")
    theta = np.geomspace(a / 100.0, math.pi, theta_count)
    vals = np.abs(eval_closed(spec, np.cos(theta)))
    idx = int(np.argmax(vals))
    return float(vals[idx]) * a**ctx.n * math.exp(a), float(theta[idx])


def _windowed_stat_i(ctx, m, a, k, theta_count, cap: float = 20.0) -> float:
    """Statistic (i) with the sup restricted to the near-pole scaling window."""
    spec = WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw")
    theta = np.geomspace(a / 100.0, min(cap * a, math.pi), theta_count)
    vals = np.abs(eval_closed(spec, np.cos(theta))) * theta**k
    return float(np.max(vals)) * math.exp(a) / a**m


def localization_report(ctx: SphereContext, m: int, a_grid=None, theta_count: int = 1000) -> dict:
    """Grid study of the three uniform localization bounds, with probes.

    Statistic (i): sup_theta |g_a^m| theta^k e^a / a^m at the documented
    exponent k = 2 floor((m+1)/2) + n - 1 and at the stable exponent m + n.
    For odd m they coincide and the statistic stays within a small factor
    across the scale window; for even m the documented exponent is one too
    small and the statistic grows like 1/a as a -> 0, which the fitted
    growth exponent exposes (an erratum kept visible, not patched over).

    Exponent probes on (i) must be read with care: the full-range sup sits
    at theta = pi, where |g_a^m| ~ c(pi) a^m makes the statistic a-flat
    regardless of the exponent, so inside the admissible window a >= 0.01
    BOTH +-0.25 probes stay bounded (the latent a^(-1/4) blow-up of the
    -0.25 probe only overtakes the antipodal term below a ~ 2e-3).  The
    report therefore also carries near-pole windowed probes (sup over
    theta in (a/100, 20a], fitted over a in [0.01, 0.1]) whose growth
    exponents separate by ~0.5 between the -0.25 and +0.25 directions, the
    honest finite-scale signature of minimality.

    Statistic (ii): sup over u in (0, pi/a] of |a^n g_a^m(cos(a u))| u^(m+n)
    e^a, bounded for every m.  Raising the exponent to m+n+0.25 makes the
    sup pin at the boundary u = pi/a, and the ratio probe/stable then equals
    (pi/a)^0.25 exactly: monotone blow-up as the u-range extends, growth
    exponent -1/4.  This is the clean minimality probe ("largest possible
    exponent") and the one the acceptance gate asserts.

    Statistic (iii): sup_theta a^n |g_a^m| e^a, attained near theta = 0.
    """
    if a_grid is None:
        a_grid = np.geomspace(0.01, 1.0, 9)
    a_grid = np.asarray(a_grid, dtype=float)
    if np.any(a_grid < 1e-2) or np.any(a_grid > 5.0):
        raise DomainError("a_grid must lie within [1e-2, 5]")

    k_printed = 2 * ((m + 1) // 2) + ctx.n - 1
    k_stable = m + ctx.n

    def sweep_i(k):
        return np.array([_sup_stat_i(ctx, m, float(a), k, theta_count) for a in a_grid])

    def sweep_ii(expo):
        return np.array([_sup_stat_ii(ctx, m, float(a), expo, theta_count) for a in a_grid])

    def block(values, exponent, grid=a_grid):
        return {
            "exponent": float(exponent),
            "values": values.tolist(),
            "max_over_min": float(np.max(values) / np.min(values)),
            "growth_exponent": _growth_exponent(grid, values),
        }

    stat_i = sweep_i(k_printed)
    stat_i_stable = sweep_i(k_stable)
    probe_i_minus = sweep_i(k_stable - 0.25)
    probe_i_plus = sweep_i(k_stable + 0.25)

    a_small = np.geomspace(max(0.01, float(np.min(a_grid))), 0.1, 7)
    window_blocks = {}
    for tag, k in (("minus", k_stable - 0.25), ("stable", k_stable), ("plus", k_stable + 0.25)):
        vals = np.array([_windowed_stat_i(ctx, m, float(a), k, theta_count) for a in a_small])
        window_blocks[tag] = block(vals, k, grid=a_small)

    stat_ii = sweep_ii(k_stable)
    probe_ii_plus = sweep_ii(k_stable + 0.25)
    ratio = probe_ii_plus / stat_ii

    stat_iii = []
    argmax_iii = []
    for a in a_grid:
        v, th = _sup_stat_iii(ctx, m, float(a), theta_count)
        stat_iii.append(v)
        argmax_iii.append(th)
    stat_iii = np.array(stat_iii)

    return {
        "schema_version": SCHEMA_VERSION,
        "m": m,
        "n": ctx.n,
        "a_grid": a_grid.tolist(),
        "statistic_i": {
            "documented": block(stat_i, k_printed),
            "stable": block(stat_i_stable, k_stable),
            "probe_minus": block(probe_i_minus, k_stable - 0.25),
            "probe_plus": block(probe_i_plus, k_stable + 0.25),
            "documented_matches_stable": k_printed == k_stable,
            "window_probe": {"a_grid": a_small.tolist(), "theta_cap_over_a": 20.0, **window_blocks},
        },
        "statistic_ii": {
            "stable": block(stat_ii, k_stable),
            "probe_plus": block(probe_ii_plus, k_stable + 0.25),
            "probe_ratio": {
                "values": ratio.tolist(),
                "growth_exponent": _growth_exponent(a_grid, ratio),
                "monotone_blowup": bool(np.all(np.diff(ratio) < 0.0)),
            },
        },
        "statistic_iii": {
            "values": stat_iii.tolist(),
            "max_over_min": float(np.max(stat_iii) / np.min(stat_iii)),
            "argmax_theta": argmax_iii,
        },
    }


# ---------------------------------------------------------------------------
# zero mean
# ---------------------------------------------------------------------------


def zero_mean_check(ctx: SphereContext, m: int, node_count: int = 2000) -> dict:
    """Mean of the limit profile against both candidate radial measures.

    Against the flat measure s^(n-1) ds the mean is exactly zero (Gegenbauer
    orthogonality after u = 1/sqrt(1+s^2)); the check integrates through the
    chart s = 2 tan(theta/2), where the integrand is analytic on [0, pi].
    The mean against d nu (the pullback of sin^(2 lambda) theta d theta) is
    also evaluated and reported: it is NOT zero, and keeping the measured
    value visible documents that only the flat-measure statement survives
    scrutiny.  A third entry confirms the pre-limit identity
    int a^n g_a^m(cos theta(s)) d nu(s) = 0, which is just the vanishing
    spherical mean of g_a^m in the chart.
    """
    if m < 1 or m > 4:
        raise DomainError(f"zero-mean check supports 1 <= m <= 4, got {m}")
    # flat measure: Gauss-Legendre in theta on [0, pi]
    nodes, weights = np.polynomial.legendre.leggauss(node_count)
    theta = 0.5 * math.pi * (nodes + 1.0)
    w = 0.5 * math.pi * weights
    s = 2.0 * np.tan(0.5 * theta)
    jac = 1.0 + 0.25 * s * s  # ds/dtheta
    vals = euclidean_limit(ctx, m, s)
    flat_integrand = vals * s ** (ctx.n - 1) * jac
    flat_mean = float(np.dot(w, flat_integrand))
    flat_abs = float(np.dot(w, np.abs(flat_integrand)))

    # d nu: Gauss-Gegenbauer in cos theta
    rule = gauss_gegenbauer(ctx.lam, node_count)
    theta_g = np.arccos(rule.nodes)
    s_g = 2.0 * np.tan(0.5 * theta_g)
    vals_g = euclidean_limit(ctx, m, s_g)
    dnu_mean = float(np.dot(rule.weights, vals_g))
    dnu_abs = float(np.dot(rule.weights, np.abs(vals_g)))

    # pre-limit mean in the same chart at a fixed small scale; the identity
    # holds at every a, and a = 0.1 keeps the near-pole peak resolvable by
    # polynomial quadrature even at lambda = 1/2
    a = 0.1
    spec = WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw")
    pre_vals = a**ctx.n * eval_closed(spec, np.cos(theta_g))
    pre_mean = float(np.dot(rule.weights, pre_vals))
    pre_abs = float(np.dot(rule.weights, np.abs(pre_vals)))

    measure_total = float(np.sum(rule.weights))
    measure_exact = math.sqrt(math.pi) * math.gamma(ctx.lam + 0.5) / math.gamma(ctx.lam + 1.0)

    return {
        "schema_version": SCHEMA_VERSION,
        "m": m,
        "n": ctx.n,
        "flat_mean": flat_mean,
        "flat_ratio": abs(flat_mean) / flat_abs,
        "dnu_mean": dnu_mean,
        "dnu_ratio": abs(dnu_mean) / dnu_abs,
        "pre_limit_scale": a,
        "pre_limit_ratio": abs(pre_mean) / pre_abs,
        "measure_total": measure_total,
        "measure_total_exact": measure_exact,
        "measure_total_error": abs(measure_total - measure_exact),
    }
