"""Self-contained property suites behind the `verify` CLI command.

Each suite re-checks the invariants of one module numerically and returns a
dict {name, passed, checks: [{name, passed, detail}]}.  `run_all` aggregates
them; fast mode shrinks grids and orders but never skips a suite.
"""

from __future__ import annotations

import math

import numpy as np

from . import asymptotics, coefficients, kernels, quadrature, transform, wavelets
from .special_functions import (
    SphereContext,
    gegenbauer,
    gegenbauer_at_one,
    gegenbauer_sequence,
    harmonic_dimension,
    reproducing_kernel,
)

SCHEMA_VERSION = 1


def _check(name: str, passed: bool, detail: str) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def _suite(name: str, checks: list) -> dict:
    return {"name": name, "passed": all(c["passed"] for c in checks), "checks": checks}


def ambient_laplacian(u, x: np.ndarray, h: float = 1e-3) -> float:
    """Central-difference Laplacian of u: R^(n+1) -> R at the point x."""
    x = np.asarray(x, dtype=float)
    center = u(x)
    acc = 0.0
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        acc += u(x + step) + u(x - step) - 2.0 * center
    return acc / (h * h)


def _continuation_point_eval(spec: wavelets.WaveletSpec):
    def u(x: np.ndarray) -> float:
        rho = float(np.linalg.norm(x))
        theta = math.acos(max(-1.0, min(1.0, x[0] / rho)))
        return wavelets.eval_continuation(spec, point=kernels.OffSpherePoint(rho=rho, theta=theta))

    return u


# ---------------------------------------------------------------------------
# per-module suites
# ---------------------------------------------------------------------------


def special_functions_suite(ctx: SphereContext, fast: bool = False) -> dict:
    checks = []
    lam = ctx.lam
    t = np.linspace(-1.0, 1.0, 7 if fast else 41)

    explicit = {
        0: np.ones_like(t),
        1: 2.0 * lam * t,
        2: 2.0 * lam * (lam + 1.0) * t * t - lam,
        3: (4.0 / 3.0) * lam * (lam + 1.0) * (lam + 2.0) * t**3 - 2.0 * lam * (lam + 1.0) * t,
    }
    worst = max(float(np.max(np.abs(gegenbauer(lam, l, t) - explicit[l]))) for l in explicit)
    checks.append(_check("low_degree_polynomials", worst < 1e-12, f"max abs err {worst:.3e}"))

    l_top = 8 if fast else 16
    worst = max(abs(gegenbauer(lam, l, 1.0) - gegenbauer_at_one(lam, l)) / gegenbauer_at_one(lam, l) for l in range(l_top + 1))
    checks.append(_check("value_at_one", worst < 1e-12, f"max rel err {worst:.3e} up to l={l_top}"))

    bound_ok = True
    for l in range(l_top + 1):
        if np.any(np.abs(gegenbauer(lam, l, t)) > gegenbauer_at_one(lam, l) * (1 + 1e-12)):
            bound_ok = False
    checks.append(_check("bounded_by_value_at_one", bound_ok, f"checked l <= {l_top}"))

    ok = all(harmonic_dimension(2, l) == 2 * l + 1 for l in range(20))
    checks.append(_check("harmonic_dimension_n2", ok, "N(2, l) == 2l + 1"))

    worst = max(
        abs(reproducing_kernel(ctx, l, 1.0) - harmonic_dimension(ctx.n, l)) / harmonic_dimension(ctx.n, l)
        for l in range(1, l_top + 1)
    )
    checks.append(_check("kernel_dimension_identity", worst < 1e-12, f"K_l(1) vs N(n,l): max rel err {worst:.3e}"))

    rule = quadrature.gauss_gegenbauer(lam, 80)
    l_orth = 6 if fast else 10
    polys = gegenbauer_sequence(lam, l_orth, rule.nodes)
    gram = np.einsum("q,iq,jq->ij", rule.weights, polys, polys)
    norms = transform.degree_norms(ctx, l_orth) * ctx.sigma_n / ctx.sigma_n_minus_1
    off = float(np.max(np.abs(gram - np.diag(np.diag(gram))))) / norms[0]
    diag = float(np.max(np.abs(np.diag(gram) / norms - 1.0)))
    checks.append(_check("orthogonality", off < 1e-12 and diag < 1e-12, f"off-diag {off:.3e}, diag rel err {diag:.3e}"))

    return _suite("special_functions", checks)


def quadrature_suite(ctx: SphereContext, fast: bool = False) -> dict:
    checks = []
    lam = ctx.lam
    rule = quadrature.gauss_gegenbauer(lam, 24)
    err = abs(float(np.sum(rule.weights)) - rule.total_weight_exact) / rule.total_weight_exact
    checks.append(_check("weight_sum", err < 1e-13, f"rel err {err:.3e}"))

    # exactness at the top monomial degree 2*count-1 (odd -> 0) and 2*count-2
    count = 8
    small = quadrature.gauss_gegenbauer(lam, count)
    odd = abs(small.integrate(small.nodes ** (2 * count - 1)))
    from scipy.special import beta as beta_fn

    k = count - 1
    exact_even = beta_fn(k + 0.5, lam + 0.5)
    even = abs(small.integrate(small.nodes ** (2 * k)) - exact_even) / exact_even
    checks.append(_check("polynomial_exactness", odd < 1e-14 and even < 1e-13, f"odd {odd:.3e}, even rel {even:.3e}"))

    grid = quadrature.log_scale_grid(0.5, 8.0, 33)
    err = abs(grid.integrate(np.ones(grid.count)) - math.log(8.0 / 0.5))
    checks.append(_check("log_grid_constant", err < 1e-13, f"abs err {err:.3e}"))

    m, l = 2, 3
    grid = quadrature.log_scale_grid(1e-6, 60.0, 801 if fast else 2001)
    val = grid.integrate((grid.nodes * l) ** (2 * m) * np.exp(-2.0 * grid.nodes * l))
    exact = math.gamma(2 * m) / 4.0**m
    err = abs(val - exact) / exact
    checks.append(_check("gamma_scale_integral", err < 1e-9, f"rel err {err:.3e}"))

    return _suite("quadrature", checks)


def coefficients_suite(ctx: SphereContext, fast: bool = False) -> dict:
    checks = []
    m_top = 8 if fast else 12

    table = coefficients.build_alpha_table(m_top)
    worst = 0
    for m in range(m_top + 1):
        for l in range(m + 1):
            worst = max(worst, abs(table.alpha(l, m) - coefficients.stirling_second_kind(m, l)))
    checks.append(_check("alpha_explicit_sum", worst == 0, f"max abs diff {worst} for m <= {m_top}"))

    op = coefficients.operator_identity_check(m_top)
    checks.append(_check("operator_identity", op["passed"], f"max discrepancy {op['max_discrepancy']} over {op['cases']} cases"))

    # row sums of the alpha table are Bell numbers (independent triangle route)
    bell = [1]
    row = [1]
    for _ in range(m_top):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
        bell.append(row[0])
    ok = all(sum(table.alpha(l, m) for l in range(m + 1)) == bell[m] for m in range(m_top + 1))
    checks.append(_check("alpha_row_sums", ok, f"Bell numbers reproduced up to m={m_top}"))

    base = coefficients.build_r_table(1)
    expected = {(0, 0): (-3, -1), (0, 1): (-1, 1), (1, 0): (1, 1), (1, 1): (3, -1)}
    ok = all(base.entries[k][j] == poly for (k, j), poly in expected.items())
    checks.append(_check("r_table_base_case", ok, "m=1 coefficients match the closed form"))

    ok = True
    for m in (1, 2, 3, 4):
        t = coefficients.build_r_table(m)
        for k in range(m + 1):
            if t.degree(k) != 2 * m - k + 1 or not t.entries[k][-1]:
                ok = False
    checks.append(_check("r_table_degree", ok, "deg R_k^m == 2m - k + 1 with nonzero top coefficient, m <= 4"))

    return _suite("coefficients", checks)


def kernels_suite(ctx: SphereContext, fast: bool = False) -> dict:
    checks = []
    r = 0.4
    val = kernels.poisson_kernel(ctx, r, 1.0)
    exact = (1.0 + r) / (ctx.sigma_n * (1.0 - r) ** ctx.n)
    err = abs(val - exact) / exact
    checks.append(_check("poisson_at_t1", err < 1e-14, f"rel err {err:.3e}"))

    count = 80 if fast else 200
    norm = quadrature.integrate_zonal(ctx, lambda t: kernels.poisson_kernel(ctx, r, t), count=count)
    checks.append(_check("poisson_normalization", abs(norm - 1.0) < 1e-12, f"surface integral {norm:.15f}"))

    m = 2
    t_grid = np.linspace(-1.0, 1.0, 5 if fast else 17)
    worst = 0.0
    for rr in (0.2, 0.6):
        series = kernels.multipole_field_series(ctx, m, rr, t_grid, tol=1e-15).value
        closed = np.array([kernels.multipole_field_closed(ctx, m, rr, kernels.OffSpherePoint(rho=1.0, theta=float(th))) for th in np.arccos(t_grid)])
        scale = float(np.max(np.abs(series)))
        worst = max(worst, float(np.max(np.abs(series - closed))) / scale)
    checks.append(_check("multipole_series_vs_closed", worst < 1e-11, f"max rel err {worst:.3e}"))

    mean = quadrature.integrate_zonal(ctx, lambda t: kernels.multipole_field_series(ctx, 1, 0.5, t, tol=1e-15).value, count=count)
    checks.append(_check("multipole_zero_mean", abs(mean) < 1e-12, f"integral {mean:.3e}"))

    spec = wavelets.WaveletSpec(ctx=ctx, m=1, a=0.7, flavor="raw")
    u = _continuation_point_eval(spec)
    x0 = np.zeros(ctx.n + 1)
    x0[0] = 1.3
    x0[1] = 0.4
    lap = ambient_laplacian(u, x0, h=1e-3)
    scale = abs(u(x0)) / float(np.dot(x0, x0))
    checks.append(_check("continuation_harmonic", abs(lap) < 1e-4 * max(scale, 1.0), f"FD Laplacian {lap:.3e} at |x|={np.linalg.norm(x0):.3f}"))

    return _suite("kernels", checks)


def wavelets_suite(ctx: SphereContext, fast: bool = False) -> dict:
    checks = []
    t_grid = np.cos(np.linspace(0.0, math.pi, 9 if fast else 25))
    worst = 0.0
    for m in (1, 2) if fast else (1, 2, 3):
        for a in (0.1, 0.5, 1.0):
            spec = wavelets.WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw")
            res = wavelets.evaluate_all(spec, t_grid, tol=1e-13)
            worst = max(worst, res["max_pairwise_rel_err"])
    checks.append(_check("four_way_equivalence", worst < 1e-9, f"max sup-normalized rel err {worst:.3e}"))

    count = 80 if fast else 200
    spec = wavelets.WaveletSpec(ctx=ctx, m=1, a=0.5, flavor="raw")
    mean = quadrature.integrate_zonal(ctx, lambda t: wavelets.eval_closed(spec, t), count=count)
    checks.append(_check("zero_mean", abs(mean) < 1e-12, f"spherical mean {mean:.3e}"))

    m, a, t0 = 2, 0.8, 0.3
    raw = wavelets.eval_closed(wavelets.WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw"), t0)
    bil = wavelets.eval_closed(wavelets.WaveletSpec(ctx=ctx, m=m, a=a, flavor="bilinear"), t0)
    lin = wavelets.eval_closed(wavelets.WaveletSpec(ctx=ctx, m=m, a=a, flavor="linear"), t0)
    err1 = abs(bil / raw - 2.0**m * ctx.sigma_n / math.sqrt(math.gamma(2 * m)))
    err2 = abs(lin / raw - ctx.sigma_n / math.gamma(m))
    checks.append(_check("flavor_constants", err1 < 1e-12 and err2 < 1e-12, f"bilinear err {err1:.3e}, linear err {err2:.3e}"))

    # order lift: g^(m+1) = m g^m - a d/da g^m, checked by central differences
    m, a = 1, 0.9
    h = 1e-5
    t_fd = np.array([-0.5, 0.2, 0.9])
    mid = wavelets.eval_closed(wavelets.WaveletSpec(ctx=ctx, m=m, a=a, flavor="raw"), t_fd)
    up = wavelets.eval_closed(wavelets.WaveletSpec(ctx=ctx, m=m, a=a + h, flavor="raw"), t_fd)
    dn = wavelets.eval_closed(wavelets.WaveletSpec(ctx=ctx, m=m, a=a - h, flavor="raw"), t_fd)
    lifted = m * mid - a * (up - dn) / (2.0 * h)
    target = wavelets.eval_closed(wavelets.WaveletSpec(ctx=ctx, m=m + 1, a=a, flavor="raw"), t_fd)
    err = float(np.max(np.abs(lifted - target) / np.max(np.abs(target))))
    checks.append(_check("scale_derivative_lift", err < 1e-7, f"FD rel err {err:.3e}"))

    return _suite("wavelets", checks)


def transform_suite(ctx: SphereContext, fast: bool = False) -> dict:
    checks = []
    m = 1
    grid = quadrature.log_scale_grid(1e-3, 40.0, 120 if fast else 240)

    f = transform.random_zonal(ctx, 6, seed=1234)
    spec = wavelets.WaveletSpec(ctx=ctx, m=m, a=1.0, flavor="bilinear")
    field = transform.forward_spectral(f, spec, grid)
    recon, report = transform.invert_bilinear(field, original=f)
    ratio = np.asarray(report["per_degree_ratio"])
    predicted = np.asarray(report["predicted_ratio"])
    worst = float(np.max(np.abs(ratio - predicted)))
    checks.append(_check("bilinear_ratio_vs_prediction", worst < 1e-6, f"max |ratio - predicted| {worst:.3e}"))
    checks.append(_check("bilinear_l2", report["l2_error"] < 5e-2, f"l2 error {report['l2_error']:.3e} (finite scale window)"))

    spec_lin = wavelets.WaveletSpec(ctx=ctx, m=2, a=1.0, flavor="linear")
    field_lin = transform.forward_spectral(f, spec_lin, grid)
    _, rep_lin = transform.invert_linear(field_lin, original=f)
    worst = float(np.max(np.abs(np.asarray(rep_lin["per_degree_ratio"]) - np.asarray(rep_lin["predicted_ratio"]))))
    checks.append(_check("linear_ratio_vs_prediction", worst < 1e-6, f"max |ratio - predicted| {worst:.3e}"))

    # spatial quadrature agrees with the diagonal spectral path
    a0 = 0.8
    t_out = np.array([0.9, 0.1, -0.6])
    spat = transform.forward_spatial(f, spec, a0, t_out, theta_count=120 if fast else 200, phi_count=120 if fast else 200)
    idx = int(np.argmin(np.abs(grid.nodes - a0)))
    single = quadrature.ScaleGrid(a_min=a0, a_max=a0, nodes=(a0,), weights=(1.0,))
    field_one = transform.forward_spectral(f, spec, single)
    spec_vals = field_one.spatial(0, t_out)
    err = float(np.max(np.abs(spat - spec_vals)) / np.max(np.abs(spec_vals)))
    checks.append(_check("spatial_vs_spectral_forward", err < 1e-8, f"rel err {err:.3e} at a={a0}, idx {idx}"))

    worst = 0.0
    for a, b, t0 in ((0.3, 0.7, 0.5), (1.1, 0.4, -0.2)):
        closed = transform.reproducing_kernel_pi(ctx, m, a, b, t0, method="closed")
        spectral = transform.reproducing_kernel_pi(ctx, m, a, b, t0, method="spectral")
        worst = max(worst, abs(closed - spectral) / abs(closed))
    checks.append(_check("reproducing_kernel_two_routes", worst < 1e-10, f"max rel err {worst:.3e}"))

    t_grid = np.linspace(-1.0, 1.0, 41)
    prof_closed = transform.condition_two_profile(ctx, 2, 0.5, t_grid)
    prof_series = transform.condition_two_profile(ctx, 2, 0.5, t_grid, method="series")
    prof_err = float(np.max(np.abs(prof_closed - prof_series)) / np.max(np.abs(prof_series)))
    checks.append(_check("condition_two_profile_two_routes", prof_err < 1e-12, f"rel err {prof_err:.3e} at m=2, R=0.5"))

    adm = transform.admissibility_report(ctx, 1, r_count=9 if fast else 25)
    ok = adm["condition1_error"] < 1e-8 and adm["w_tail_check_max_abs_err"] < 1e-10 and adm["condition2_relative_change"] < 0.05
    checks.append(
        _check(
            "admissibility_m1",
            ok,
            f"cond1 err {adm['condition1_error']:.3e}, W-check {adm['w_tail_check_max_abs_err']:.3e}, cond2 sup {adm['condition2_sup']:.6f} (refine change {adm['condition2_relative_change']:.2%})",
        )
    )

    # Parseval on a single degree: ||Wf||^2 == P(l) * ||f||^2
    l_single = 3
    coeffs = [0.0] * (l_single + 1)
    coeffs[l_single] = 1.0
    f_single = transform.ZonalFunction(ctx=ctx, coeffs=tuple(coeffs))
    field_single = transform.forward_spectral(f_single, spec, grid)
    norms = transform.degree_norms(ctx, l_single)
    energy = float(np.dot(grid.weights, field_single.coeffs[:, l_single] ** 2) * norms[l_single])
    predicted_energy = float(transform.predicted_degree_factor(m, "bilinear", grid, [l_single])[0] * norms[l_single])
    err = abs(energy - predicted_energy) / predicted_energy
    checks.append(_check("parseval_single_degree", err < 1e-6, f"rel err {err:.3e}"))

    try:
        transform.invert_bilinear(field_lin)
        checks.append(_check("flavor_mismatch_rejected", False, "linear field accepted by bilinear inversion"))
    except Exception as exc:  # noqa: BLE001 - the suite records, never raises
        checks.append(_check("flavor_mismatch_rejected", type(exc).__name__ == "DomainError", f"raised {type(exc).__name__}"))

    return _suite("transform", checks)


def asymptotics_suite(ctx: SphereContext, fast: bool = False) -> dict:
    checks = []
    s = np.geomspace(1e-3, 1e3, 100)
    worst = float(np.max(asymptotics.pullback_residual(ctx, s)))
    checks.append(_check("pullback_identity", worst < 1e-12, f"max residual {worst:.3e}"))

    val = asymptotics.euclidean_limit(ctx, 1, 0.0)
    exact = 2.0 * ctx.n / ctx.sigma_n
    err = abs(val - exact) / exact
    checks.append(_check("limit_at_zero_m1", err < 1e-13, f"rel err {err:.3e}"))

    ok = True
    detail = []
    for m in (1, 2):
        slope = asymptotics.decay_slope(ctx, m)
        target = -(m + ctx.n + ((m + 1) % 2))
        if abs(slope - target) > 0.05:
            ok = False
        detail.append(f"m={m}: {slope:.3f} vs {target}")
    checks.append(_check("decay_slope", ok, "; ".join(detail)))

    a_list = (0.04, 0.02, 0.01) if fast else (0.04, 0.02, 0.01, 0.005)
    s_grid = np.concatenate([[0.0], np.geomspace(1e-2, 50.0, 120 if fast else 400)])
    conv = asymptotics.euclidean_convergence_report(ctx, 1, a_list=a_list, s_grid=s_grid)
    checks.append(_check("euclidean_convergence", conv["monotone"], f"sup errors {['%.3e' % e for e in conv['sup_errors']]}"))

    zm = asymptotics.zero_mean_check(ctx, 1, node_count=800 if fast else 2000)
    ok = zm["flat_ratio"] < 1e-8 and zm["pre_limit_ratio"] < 1e-10 and zm["measure_total_error"] < 1e-10
    checks.append(
        _check(
            "zero_mean_flat_measure",
            ok,
            f"flat ratio {zm['flat_ratio']:.3e}, pre-limit {zm['pre_limit_ratio']:.3e}, dnu ratio {zm['dnu_ratio']:.3e} (nonzero, reported)",
        )
    )

    m_odd = 1
    loc = asymptotics.localization_report(ctx, m_odd, a_grid=np.geomspace(0.01, 1.0, 5 if fast else 9), theta_count=400 if fast else 1000)
    ratio = loc["statistic_ii"]["probe_ratio"]
    window = loc["statistic_i"]["window_probe"]
    ok = (
        loc["statistic_i"]["documented"]["max_over_min"] < 10.0
        and loc["statistic_ii"]["stable"]["max_over_min"] < 10.0
        and loc["statistic_iii"]["max_over_min"] < 10.0
        and ratio["monotone_blowup"]
        and -0.30 < ratio["growth_exponent"] < -0.20
        and loc["statistic_i"]["probe_plus"]["max_over_min"] < 10.0
        and window["minus"]["growth_exponent"] < window["stable"]["growth_exponent"] - 0.1
        and window["plus"]["growth_exponent"] > window["stable"]["growth_exponent"] + 0.1
    )
    checks.append(
        _check(
            "localization_bounds_m_odd",
            ok,
            f"stable stats bounded (factor < 10); (ii) ratio probe exponent {ratio['growth_exponent']:.3f} with monotone blow-up; "
            f"windowed (i) probe slopes {window['minus']['growth_exponent']:.2f} < {window['stable']['growth_exponent']:.2f} < {window['plus']['growth_exponent']:.2f}",
        )
    )

    return _suite("asymptotics", checks)


def run_all(ctx: SphereContext, m: int = 1, fast: bool = False) -> dict:
    """Run every suite; m is accepted for CLI symmetry (suites pick their own orders)."""
    suites = [
        special_functions_suite(ctx, fast),
        quadrature_suite(ctx, fast),
        coefficients_suite(ctx, fast),
        kernels_suite(ctx, fast),
        wavelets_suite(ctx, fast),
        transform_suite(ctx, fast),
        asymptotics_suite(ctx, fast),
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "n": ctx.n,
        "m": m,
        "fast": fast,
        "suites": suites,
        "passed": all(s["passed"] for s in suites),
    }
