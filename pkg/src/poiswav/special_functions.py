"""Gegenbauer polynomials, reproducing kernels and sphere constants.

Conventions (used throughout the package):

* ``S^n`` is the unit sphere in ``R^(n+1)``; ``lambda = (n-1)/2``.
* The surface measure is normalized so that the total mass is
  ``Sigma_n = 2 pi^(lambda+1) / Gamma(lambda+1)``.
* ``C_l^lambda`` are the Gegenbauer (ultraspherical) polynomials generated by
  ``(1 - 2tr + r^2)^(-lambda) = sum_l C_l^lambda(t) r^l``.
* ``K_l^lambda = ((lambda+l)/lambda) C_l^lambda`` is the reproducing kernel of
  the degree-l harmonics under the Sigma_n-normalized zonal convolution.

Evaluation is by the classical three-term recurrence

    l C_l = 2 (l + lambda - 1) t C_(l-1) - (l + 2 lambda - 2) C_(l-2),

seeded with ``C_0 = 1``, ``C_1 = 2 lambda t``.  The explicit alternating sum
is numerically unstable for large degrees and is kept only as a low-degree
test oracle in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, InvalidContextError

#: points with |t| exceeding 1 by at most this much are clamped onto [-1, 1];
#: larger excursions are rejected (see ``_clamp_cosine``).
COSINE_CLAMP_TOL = 1e-12


def sphere_area(n: int) -> float:
    """Surface area Sigma_n of the unit sphere S^n in R^(n+1).

    The formula ``2 pi^(lambda+1) / Gamma(lambda+1)`` with
    ``lambda = (n-1)/2`` is valid down to n = 0 (Sigma_0 = 2, the two-point
    sphere); the low-dimensional values appear as constants of iterated zonal
    integrals, so they are permitted here even though the ambient dimension
    of every computation is n >= 2.
    """
    if n < 0:
        raise InvalidContextError(f"sphere dimension must be >= 0, got {n}")
    lam = (n - 1) / 2
    return 2.0 * math.pi ** (lam + 1) / math.gamma(lam + 1)


@dataclass(frozen=True)
class SphereContext:
    """Ambient parameter bundle: dimension n, index lambda, surface area.

    ``lam_exact`` keeps lambda = (n-1)/2 as an exact rational so coefficient
    work (which must stay integer-exact) never sees a rounded value.
    """

    n: int
    lam_exact: Fraction = field(init=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise InvalidContextError(f"sphere dimension must be an integer, got {self.n!r}")
        if self.n < 2:
            raise InvalidContextError(
                f"sphere dimension must be >= 2 (lambda > 0 required), got n={self.n}"
            )
        object.__setattr__(self, "lam_exact", Fraction(self.n - 1, 2))

    @property
    def lam(self) -> float:
        """lambda = (n-1)/2 as a float."""
        return float(self.lam_exact)

    @property
    def sigma_n(self) -> float:
        """Total surface measure of S^n."""
        return sphere_area(self.n)

    @property
    def sigma_n_minus_1(self) -> float:
        """Surface area of the equatorial S^(n-1); the colatitude-integral factor."""
        return sphere_area(self.n - 1)


def _as_lambda(ctx_or_lam) -> float:
    if isinstance(ctx_or_lam, SphereContext):
        return ctx_or_lam.lam
    lam = float(ctx_or_lam)
    if lam <= 0.0:
        raise InvalidContextError(f"Gegenbauer order lambda must be positive, got {lam}")
    return lam


def _clamp_cosine(t, tol: float = COSINE_CLAMP_TOL):
    """Clamp |t| <= 1 + tol onto [-1, 1]; reject anything further out.

    Off-sphere geometry (harmonic continuation) produces cos(chi) values that
    can overshoot [-1, 1] by rounding only; a genuine overshoot indicates a
    caller bug and must not be silently absorbed.
    """
    t = np.asarray(t, dtype=float)
    excess = np.abs(t) - 1.0
    if np.any(excess > tol):
        worst = float(np.max(excess))
        raise DomainError(f"cosine argument outside [-1, 1] by {worst:.3e} (> {tol:.0e})")
    return np.clip(t, -1.0, 1.0)


def gegenbauer(ctx_or_lam, l: int, t):
    """C_l^lambda(t), vectorized over t, by the three-term recurrence.

    Accepts a SphereContext (order lambda = (n-1)/2) or a bare positive
    lambda.  Scalar t in, scalar out.
    """
    lam = _as_lambda(ctx_or_lam)
    if l < 0:
        raise DomainError(f"Gegenbauer degree must be >= 0, got {l}")
    t = _clamp_cosine(t)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    c_prev = np.ones_like(t)
    if l == 0:
        return float(c_prev[0]) if scalar else c_prev
    c_cur = 2.0 * lam * t
    for k in range(2, l + 1):
        c_prev, c_cur = c_cur, (2.0 * (k + lam - 1.0) * t * c_cur - (k + 2.0 * lam - 2.0) * c_prev) / k
    return float(c_cur[0]) if scalar else c_cur


def gegenbauer_sequence(ctx_or_lam, l_max: int, t) -> np.ndarray:
    """All of C_0^lambda(t) .. C_lmax^lambda(t) stacked along axis 0.

    Shared workhorse for series evaluation: one recurrence pass over a t grid
    instead of l_max separate calls.
    """
    lam = _as_lambda(ctx_or_lam)
    if l_max < 0:
        raise DomainError(f"Gegenbauer degree must be >= 0, got {l_max}")
    t = np.atleast_1d(_clamp_cosine(t))
    out = np.empty((l_max + 1,) + t.shape)
    out[0] = 1.0
    if l_max >= 1:
        out[1] = 2.0 * lam * t
    for k in range(2, l_max + 1):
        out[k] = (2.0 * (k + lam - 1.0) * t * out[k - 1] - (k + 2.0 * lam - 2.0) * out[k - 2]) / k
    return out


def gegenbauer_at_one(ctx_or_lam, l: int) -> float:
    """C_l^lambda(1) = Gamma(l + 2 lambda) / (Gamma(2 lambda) l!).

    Computed in log space; this is the sup of |C_l^lambda| on [-1, 1] for
    lambda > 0 and drives every series tail bound in the package.
    """
    lam = _as_lambda(ctx_or_lam)
    if l < 0:
        raise DomainError(f"Gegenbauer degree must be >= 0, got {l}")
    return math.exp(math.lgamma(l + 2.0 * lam) - math.lgamma(2.0 * lam) - math.lgamma(l + 1.0))


def reproducing_kernel(ctx_or_lam, l: int, t):
    """K_l^lambda(t) = ((lambda + l)/lambda) C_l^lambda(t)."""
    lam = _as_lambda(ctx_or_lam)
    return (lam + l) / lam * gegenbauer(lam, l, t)


def harmonic_dimension(n: int, l: int) -> int:
    """Number of linearly independent hyperspherical harmonics of degree l.

    N(n, l) = (n + 2l - 1) (n + l - 2)! / ((n - 1)! l!), exact integer
    (Python integers are arbitrary precision, so no overflow is possible).
    """
    if n < 2:
        raise InvalidContextError(f"sphere dimension must be >= 2, got {n}")
    if l < 0:
        raise DomainError(f"harmonic degree must be >= 0, got {l}")
    num = (n + 2 * l - 1) * math.factorial(n + l - 2)
    den = math.factorial(n - 1) * math.factorial(l)
    quotient, remainder = divmod(num, den)
    if remainder:  # cannot happen; guards the formula against typos
        raise ArithmeticError(f"harmonic_dimension({n}, {l}) is not an integer")
    return quotient
