"""Poisson kernel on S^n and the multipole fields it is built from.

The kernel of a source at zeta = r e (0 < r < 1, e the north pole) is

    p_zeta(y) = (1/Sigma_n) (1 - r^2) / (1 - 2 r cos(theta) + r^2)^((n+1)/2)
              = (1/Sigma_n) sum_l r^l K_l^lambda(cos theta),

and the multipole fields are Psi^m = (r d/dr)^m Psi with the monopole
Psi = (1/Sigma_n) (1 - 2 r t + r^2)^(-lambda), i.e.

    Psi^m(t) = (1/Sigma_n) sum_l l^m r^l C_l^lambda(t),
    p = Psi + Psi^1 / lambda.

Every denominator is evaluated through the cancellation-free form

    1 - 2 r t + r^2 = (1 - r)^2 + 2 r (1 - t),

with 1 - r = -expm1(-a) when r = e^(-a), which keeps full relative accuracy
arbitrarily close to the source (small a, small theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coefficients import build_alpha_table
from .errors import DomainError, SingularityError, TruncationError
from .special_functions import (
    SphereContext,
    _clamp_cosine,
    gegenbauer,
    gegenbauer_sequence,
)

#: hard cap on series length; hitting it raises TruncationError
L_MAX_CAP = 10**6


@dataclass(frozen=True)
class SourcePoint:
    """Field source at zeta = r e strictly inside the unit ball (r = e^(-a))."""

    r: float

    def __post_init__(self):
        if not (0.0 < self.r < 1.0):
            raise DomainError(f"source radius must satisfy 0 < r < 1, got {self.r}")


@dataclass(frozen=True)
class OffSpherePoint:
    """Axisymmetric coordinates of x in R^(n+1): radius rho, colatitude theta."""

    rho: float
    theta: float

    def __post_init__(self):
        if self.rho <= 0.0:
            raise DomainError(f"radius must be positive, got {self.rho}")
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"colatitude must lie in [0, pi], got {self.theta}")


class SeriesEval(NamedTuple):
    """Truncated series value with its rigorous tail bound."""

    value: float | np.ndarray
    tail_bound: float
    l_max: int


def stable_denominator(r: float, t, rho: float = 1.0):
    """rho^2 - 2 rho r t + r^2 evaluated as (rho - r)^2 + 2 rho r (1 - t) >= 0."""
    t = np.asarray(t, dtype=float)
    return (rho - r) ** 2 + 2.0 * rho * r * (1.0 - t)


def poisson_kernel(ctx: SphereContext, r: float, t):
    """p_zeta(cos theta) for zeta = r e; vectorized over t."""
    if not (0.0 < r < 1.0):
        raise DomainError(f"source radius must satisfy 0 < r < 1, got {r}")
    t = _clamp_cosine(t)
    d = stable_denominator(r, t)
    return (1.0 - r * r) / (ctx.sigma_n * d ** ((ctx.n + 1) / 2.0))


def monopole_field(ctx: SphereContext, r: float, t, rho: float = 1.0):
    """Psi_zeta(x) = (1/Sigma_n) |x - zeta|^(-2 lambda) on the ray |x| = rho."""
    if r <= 0.0:
        raise DomainError(f"source radius must be positive, got {r}")
    d = stable_denominator(r, t, rho)
    return 1.0 / (ctx.sigma_n * d**ctx.lam)


def multipole_series_l_max(ctx: SphereContext, m: int, r: float, tol: float) -> int:
    """Smallest series length with guaranteed absolute tail below tol.

    Terms of Psi^m are bounded by l^m r^l C_l^lambda(1) / Sigma_n, and the
    term ratio is below rho_L = r (1 + (m + 2 lambda) / L) for l >= L, so once
    rho_L < 1 the geometric bound term(L+1) / (1 - rho_L) is rigorous.
    """
    lam = ctx.lam
    log_r = math.log(r)

    def log_term(l: int) -> float:
        # log of l^m r^l C_l(1) / Sigma_n
        return (
            m * math.log(l)
            + l * log_r
            + math.lgamma(l + 2.0 * lam)
            - math.lgamma(2.0 * lam)
            - math.lgamma(l + 1.0)
            - math.log(ctx.sigma_n)
        )

    log_tol = math.log(tol)
    l = max(10, int((m + 2.0 * lam) * r / (1.0 - r)) + 1)
    while l < L_MAX_CAP:
        ratio = r * (1.0 + (m + 2.0 * lam) / (l + 1))
        if ratio < 1.0:
            log_tail = log_term(l + 1) - math.log(1.0 - ratio)
            if log_tail <= log_tol:
                return l
        l = max(l + 8, int(l * 1.2))
    raise TruncationError(
        f"series tail for m={m}, r={r} cannot reach tol={tol} within {L_MAX_CAP} terms",
        suggested_l_max=L_MAX_CAP,
    )


def multipole_series_tail_bound(ctx: SphereContext, m: int, r: float, l_last: int) -> float:
    """Rigorous bound on the absolute tail of Psi^m truncated after degree l_last."""
    lam = ctx.lam
    ratio = r * (1.0 + (m + 2.0 * lam) / (l_last + 1))
    if ratio >= 1.0:
        return math.inf
    l = l_last + 1
    log_first = (
        m * math.log(l)
        + l * math.log(r)
        + math.lgamma(l + 2.0 * lam)
        - math.lgamma(2.0 * lam)
        - math.lgamma(l + 1.0)
        - math.log(ctx.sigma_n)
    )
    return math.exp(log_first) / (1.0 - ratio)


def multipole_field_series(
    ctx: SphereContext,
    m: int,
    r: float,
    t,
    tol: float = 1e-14,
    l_max: int | None = None,
) -> SeriesEval:
    """Psi^m(cos theta) = (1/Sigma_n) sum_l l^m r^l C_l^lambda(t), truncated.

    The returned tail bound is rigorous (|C_l| <= C_l(1) plus a geometric
    envelope); tol is interpreted as an absolute tolerance on the field.
    For m = 0 the closed monopole form is exact and preferred; the series
    path is still available for cross-checks.
    """
    if m < 0:
        raise DomainError(f"multipole order must be >= 0, got {m}")
    if not (0.0 < r < 1.0):
        raise DomainError(f"source radius must satisfy 0 < r < 1, got {r}")
    if l_max is None:
        l_max = multipole_series_l_max(ctx, m, r, tol)
    tail = multipole_series_tail_bound(ctx, m, r, l_max)
    if tail > tol:
        raise TruncationError(
            f"l_max={l_max} leaves tail bound {tail:.3e} > tol={tol:.3e}",
            suggested_l_max=multipole_series_l_max(ctx, m, r, tol),
        )
    t_arr = np.atleast_1d(_clamp_cosine(t))
    polys = gegenbauer_sequence(ctx.lam, l_max, t_arr)
    l_range = np.arange(l_max + 1, dtype=float)
    coeff = l_range**m * r**l_range if m > 0 else r**l_range
    value = (coeff @ polys.reshape(l_max + 1, -1)).reshape(t_arr.shape) / ctx.sigma_n
    if np.isscalar(t) or np.ndim(t) == 0:
        value = float(value[()] if value.shape == () else value[0])
    return SeriesEval(value=value, tail_bound=tail, l_max=l_max)


def multipole_field_closed(ctx: SphereContext, m: int, r: float, point: OffSpherePoint) -> float:
    """Psi^m at an off-sphere point, via the finite harmonic expansion.

    Sigma_n (d/dr)^l Psi has the closed form l! C_l(cos chi) / |x - r e|^(l+2 lambda),
    and (r d/dr)^m = sum_l alpha_l^m r^l (d/dr)^l, so

        Psi^m(x) = (1/Sigma_n) sum_{l=0}^{m} alpha_l^m r^l l!
                   C_l^lambda(cos chi) / |x - r e|^(l + 2 lambda),

    with cos chi = (rho cos theta - r) / |x - r e| computed algebraically
    (no angle arithmetic, hence no cancellation at theta -> 0).
    """
    if m < 0:
        raise DomainError(f"multipole order must be >= 0, got {m}")
    if not (0.0 < r < 1.0):
        raise DomainError(f"source radius must satisfy 0 < r < 1, got {r}")
    rho, theta = point.rho, point.theta
    cos_theta = math.cos(theta)
    dist_sq = float(stable_denominator(r, cos_theta, rho))
    dist = math.sqrt(dist_sq)
    if dist < 1e-12:
        raise SingularityError(f"evaluation point within {dist:.1e} of the source")
    cos_chi = (rho * cos_theta - r) / dist
    table = build_alpha_table(m)
    two_lam = 2.0 * ctx.lam
    acc = 0.0
    for l in range(m + 1):
        alpha = table.alpha(l, m)
        if alpha == 0:
            continue
        acc += alpha * r**l * math.factorial(l) * gegenbauer(ctx.lam, l, cos_chi) / dist ** (l + two_lam)
    return acc / ctx.sigma_n
