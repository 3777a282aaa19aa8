"""Poisson wavelet evaluation through four independent representations.

The raw wavelet of order m >= 1 at scale a > 0 (source radius r = e^(-a)) is
defined recursively by g^1 = a r d/dr p_(r e), g^(m+1) = a r d/dr g^m, and
admits the pairwise-equivalent forms

1. Gegenbauer series        (1/Sigma_n) sum_{l>=1} ((lambda+l)/lambda)
                            (a l)^m e^(-a l) C_l^lambda(t)
2. closed form              (a^m/Sigma_n) D_(lambda+m+1)
                            sum_k R_k^m(r) t^k,   D_j = r / (1-2rt+r^2)^j
3. harmonic continuation    (a^m/Sigma_n) sum_{l=0}^{m+1} l!
                            (alpha_l^m + alpha_l^(m+1)/lambda) e^(-a l)
                            C_l^lambda(cos chi) / |x - r e|^(l+2 lambda)
4. multipole sum            a^m (Psi^m + Psi^(m+1)/lambda)

The closed form is the production evaluator (O(m) work per point); the
series is the oracle.  Representation 3 extends off the sphere; restricted
to rho = 1 it must agree with the others.

Normalization flavors rescale the raw wavelet by an exact constant:
bilinear G = (2^m Sigma_n / sqrt(Gamma(2m))) g and linear
G~ = (Sigma_n / Gamma(m)) g, so that their Gegenbauer expansions are
sum psi_m(al) K_l and sum gamma_m(al) K_l with the admissibility-normalized
filter profiles psi_m(t) = (2^m/sqrt(Gamma(2m))) t^m e^(-t) and
gamma_m(t) = t^m e^(-t) / Gamma(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefficients import build_alpha_table, build_r_table
from .errors import DomainError, SingularityError, TruncationError
from .kernels import L_MAX_CAP, OffSpherePoint, multipole_field_series
from .special_functions import SphereContext, _clamp_cosine, gegenbauer, gegenbauer_sequence

FLAVORS = ("raw", "bilinear", "linear")


def flavor_scale(ctx: SphereContext, m: int, flavor: str) -> float:
    """Exact constant multiplying the raw wavelet for the requested flavor."""
    if flavor == "raw":
        return 1.0
    if flavor == "bilinear":
        return 2.0**m * ctx.sigma_n / math.sqrt(math.gamma(2 * m))
    if flavor == "linear":
        return ctx.sigma_n / math.gamma(m)
    raise DomainError(f"unknown flavor {flavor!r}, expected one of {FLAVORS}")


@dataclass(frozen=True)
class WaveletSpec:
    """Order m >= 1, scale a > 0 and normalization flavor on a given sphere."""

    ctx: SphereContext
    m: int
    a: float
    flavor: str = "raw"

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise DomainError(f"wavelet order must be an integer >= 1, got {self.m!r}")
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise DomainError(f"scale must be a positive finite real, got {self.a}")
        if self.flavor not in FLAVORS:
            raise DomainError(f"unknown flavor {self.flavor!r}, expected one of {FLAVORS}")

    @property
    def r(self) -> float:
        return math.exp(-self.a)

    @property
    def one_minus_r(self) -> float:
        """1 - e^(-a) without cancellation."""
        return -math.expm1(-self.a)

    @property
    def scale_constant(self) -> float:
        return flavor_scale(self.ctx, self.m, self.flavor)


def filter(kind: str, m: int, t):
    """Admissibility-normalized filter profiles psi_m / gamma_m.

    psi_m(t) = (2^m / sqrt(Gamma(2m))) t^m e^(-t) satisfies
    int psi_m^2 dt/t = 1; gamma_m(t) = t^m e^(-t) / Gamma(m) satisfies
    int gamma_m dt/t = 1.  Both vanish at t = 0 (degree-0 blindness).
    """
    if m < 1:
        raise DomainError(f"filter order must be >= 1, got {m}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise DomainError("filter argument must be nonnegative")
    core = t**m * np.exp(-t)
    if kind == "psi_m":
        return 2.0**m / math.sqrt(math.gamma(2 * m)) * core
    if kind == "gamma_m":
        return core / math.gamma(m)
    raise DomainError(f"unknown filter kind {kind!r}, expected 'psi_m' or 'gamma_m'")


# ---------------------------------------------------------------------------
# representation 1: Gegenbauer series
# ---------------------------------------------------------------------------


def series_l_max(ctx: SphereContext, m: int, a: float, tol: float) -> int:
    """Series length guaranteeing absolute tail <= tol for the raw wavelet.

    Terms are bounded by ((lambda+l)/lambda) (al)^m e^(-al) C_l(1) / Sigma_n
    and the term ratio by e^(-a) (1 + 1/l)^(m+1) (1 + 2 lambda / l), so a
    geometric envelope applies once that bound drops below 1.
    """
    lam = ctx.lam

    def log_term(l: int) -> float:
        return (
            math.log((lam + l) / lam)
            + m * math.log(a * l)
            - a * l
            + math.lgamma(l + 2.0 * lam)
            - math.lgamma(2.0 * lam)
            - math.lgamma(l + 1.0)
            - math.log(ctx.sigma_n)
        )

    log_tol = math.log(tol)
    l = max(10, int(m / a) + 1)  # beyond the maximum of (al)^m e^(-al)
    while l < L_MAX_CAP:
        ratio = math.exp(-a) * (1.0 + 1.0 / (l + 1)) ** (m + 1) * (1.0 + 2.0 * lam / (l + 1))
        if ratio < 1.0 and log_term(l + 1) - math.log(1.0 - ratio) <= log_tol:
            return l
        l = max(l + 8, int(l * 1.2))
    raise TruncationError(
        f"wavelet series for m={m}, a={a} cannot reach tol={tol} within {L_MAX_CAP} terms",
        suggested_l_max=L_MAX_CAP,
    )


def eval_series(spec: WaveletSpec, t, tol: float = 1e-12):
    """Representation 1, truncated with a rigorous absolute tail <= tol."""
    ctx, m, a = spec.ctx, spec.m, spec.a
    lam = ctx.lam
    l_max = series_l_max(ctx, m, a, tol)
    t_arr = np.atleast_1d(_clamp_cosine(t))
    polys = gegenbauer_sequence(lam, l_max, t_arr)
    l_range = np.arange(1, l_max + 1, dtype=float)
    log_w = m * np.log(a * l_range) - a * l_range
    weights = (lam + l_range) / lam * np.exp(log_w) / ctx.sigma_n
    value = (weights @ polys[1:].reshape(l_max, -1)).reshape(t_arr.shape)
    value = spec.scale_constant * value
    if np.ndim(t) == 0:
        return float(value[0])
    return value


# ---------------------------------------------------------------------------
# representation 2: closed form
# ---------------------------------------------------------------------------


def closed_profile(ctx: SphereContext, m: int, r: float, t):
    """The r-free closed-form profile h_m with g_a^m = a^m h_m(e^(-a), t).

    h_m(r, t) = (1/Sigma_n) (r / (1 - 2rt + r^2)^(lambda+m+1))
                sum_k R_k^m(r) t^k,

    exposed with free r in (0, 1) because the order recursion acts on r at
    fixed a-prefactor: r d/dr h_m = h_(m+1).
    """
    if not (0.0 < r < 1.0):
        raise DomainError(f"source radius must satisfy 0 < r < 1, got {r}")
    t = np.asarray(_clamp_cosine(t), dtype=float)
    table = build_r_table(m, ctx.n)
    r_polys = table.eval_r_polys(r)
    num = np.zeros_like(t)
    for coeff in reversed(r_polys):
        num = num * t + coeff
    d = (1.0 - r) ** 2 + 2.0 * r * (1.0 - t)
    return r * num / (ctx.sigma_n * d ** (ctx.lam + m + 1.0))


def eval_closed(spec: WaveletSpec, t):
    """Representation 2; the production evaluator.

    The denominator is assembled from 1 - r = -expm1(-a), which keeps the
    (1 - 2rt + r^2) factor cancellation-free down to arbitrarily small
    scales.  The numerator polynomial sum_k R_k^m(r) t^k does cancel near
    t = 1 once m grows (its exact integer coefficients alternate), so the
    whole rational part is accumulated in extended precision (longdouble)
    and only the final value is rounded back to double.
    """
    ctx, m = spec.ctx, spec.m
    t_arr = np.asarray(_clamp_cosine(t), dtype=float)
    table = build_r_table(m, ctx.n)
    ld = np.longdouble
    r_ld = ld(spec.r)
    r_sq = r_ld * r_ld
    t_ld = t_arr.astype(ld)
    num = np.zeros(t_arr.shape, dtype=ld)
    for k in range(m, -1, -1):
        acc = ld(0.0)
        for coeff in reversed(table.entries[k]):
            acc = acc * r_sq + int(coeff)
        if table.parity(k):
            acc = acc * r_ld
        num = num * t_ld + acc
    omr_ld = ld(spec.one_minus_r)
    d = omr_ld * omr_ld + 2.0 * r_ld * (1.0 - t_ld)
    value_ld = r_ld * num / d ** ld(ctx.lam + m + 1.0)
    value = spec.scale_constant * spec.a**m / ctx.sigma_n * value_ld.astype(float)
    if np.ndim(t) == 0:
        return float(value)
    return value


# ---------------------------------------------------------------------------
# representation 3: harmonic continuation
# ---------------------------------------------------------------------------


def eval_continuation(spec: WaveletSpec, t=None, rho: float = 1.0, point: OffSpherePoint | None = None):
    """Representation 3 at |x| = rho, colatitude arccos(t); rho = 1 is on-sphere.

    Finite sum over l = 0 .. m+1; the l = 0 term vanishes for m >= 1 since
    alpha_0^m = alpha_0^(m+1) = 0.
    """
    if point is not None:
        rho, t = point.rho, math.cos(point.theta)
    if t is None:
        raise DomainError("either t or point must be given")
    if rho <= 0.0:
        raise DomainError(f"radius must be positive, got {rho}")
    ctx, m, a = spec.ctx, spec.m, spec.a
    lam = ctx.lam
    r = spec.r
    t_arr = np.asarray(_clamp_cosine(t), dtype=float)
    dist_sq = (rho - r) ** 2 + 2.0 * rho * r * (1.0 - t_arr)
    dist = np.sqrt(dist_sq)
    if np.any(dist < 1e-12):
        raise SingularityError("evaluation point coincides with the wavelet source")
    cos_chi = np.clip((rho * t_arr - r) / dist, -1.0, 1.0)
    table = build_alpha_table(m + 1)
    acc = np.zeros_like(t_arr)
    for l in range(m + 2):
        weight = table.alpha(l, m) + table.alpha(l, m + 1) / lam
        if weight == 0.0:
            continue
        acc += (
            math.factorial(l)
            * weight
            * math.exp(-a * l)
            * gegenbauer(lam, l, cos_chi)
            / dist ** (l + 2.0 * lam)
        )
    value = spec.scale_constant * a**m / ctx.sigma_n * acc
    if np.ndim(t) == 0:
        return float(value)
    return value


def expansion_about_origin(spec: WaveletSpec, t, rho: float, tol: float = 1e-12):
    """The continuation's expansion around 0, valid for rho > r:

    g_a^m(x) = (a^m / (Sigma_n rho^(2 lambda)))
               sum_l l^m (r/rho)^l K_l^lambda(cos theta),

    assembled from the multipole series at effective radius r/rho.
    """
    ctx, m, a = spec.ctx, spec.m, spec.a
    q = spec.r / rho
    if not (0.0 < q < 1.0):
        raise DomainError(f"expansion requires rho > r, got rho={rho}, r={spec.r}")
    inner_tol = tol / (2.0 * a**m * max(1.0, 1.0 / ctx.lam))
    psi_m_val = multipole_field_series(ctx, m, q, t, tol=inner_tol).value
    psi_m1_val = multipole_field_series(ctx, m + 1, q, t, tol=inner_tol).value
    return spec.scale_constant * a**m / rho ** (2.0 * ctx.lam) * (psi_m_val + psi_m1_val / ctx.lam)


# ---------------------------------------------------------------------------
# representation 4: multipole sum
# ---------------------------------------------------------------------------


def eval_multipole_sum(spec: WaveletSpec, t, tol: float = 1e-12):
    """Representation 4: g = a^m (Psi^m + Psi^(m+1)/lambda)."""
    ctx, m, a = spec.ctx, spec.m, spec.a
    inner_tol = tol / (2.0 * a**m * max(1.0, 1.0 / ctx.lam))
    psi_m_val = multipole_field_series(ctx, m, spec.r, t, tol=inner_tol).value
    psi_m1_val = multipole_field_series(ctx, m + 1, spec.r, t, tol=inner_tol).value
    return spec.scale_constant * a**m * (psi_m_val + psi_m1_val / ctx.lam)


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

REPRESENTATIONS = ("series", "closed", "continuation", "multipole")


def evaluate(spec: WaveletSpec, t, representation: str = "closed", tol: float = 1e-12):
    """Single-representation entry point used by the CLI."""
    if representation == "series":
        return eval_series(spec, t, tol=tol)
    if representation == "closed":
        return eval_closed(spec, t)
    if representation == "continuation":
        return eval_continuation(spec, t)
    if representation == "multipole":
        return eval_multipole_sum(spec, t, tol=tol)
    raise DomainError(f"unknown representation {representation!r}, expected one of {REPRESENTATIONS}")


def evaluate_all(spec: WaveletSpec, t, tol: float = 1e-12) -> dict:
    """All four representations plus their sup-normalized disagreement.

    The relative error is max over pairs of the pointwise absolute
    disagreement divided by the sup of |g| over the grid and representations;
    pointwise-relative comparison would be meaningless at the zeros of g.
    """
    values = {name: np.atleast_1d(evaluate(spec, t, name, tol=tol)) for name in REPRESENTATIONS}
    scale = max(float(np.max(np.abs(v))) for v in values.values())
    scale = max(scale, np.finfo(float).tiny)
    worst = 0.0
    names = list(REPRESENTATIONS)
    pointwise = np.zeros_like(values["closed"])
    for i, u in enumerate(names):
        for v in names[i + 1 :]:
            diff = np.abs(values[u] - values[v])
            pointwise = np.maximum(pointwise, diff)
            worst = max(worst, float(np.max(diff)))
    values["max_pairwise_rel_err"] = worst / scale
    values["pointwise_rel_err"] = pointwise / scale
    return values
