"""Numerical integration backbone.

Two rule families cover every integral in the package:

* Gauss rules on [-1, 1] for the Gegenbauer weight ``(1 - t^2)^(lambda - 1/2)``
  (every sphere integral of a zonal function reduces to this weight), built
  from scipy's Golub--Welsch machinery.
* Log-uniform grids with trapezoid weights in ``u = log a`` for the scale
  integrals ``int f(a) da/a``.  The integrands here (``psi_m(al)^2`` etc.)
  are smooth and decay at both ends of the log axis, where the trapezoid
  rule converges faster than any power of the step, and the grid doubles as
  the sampling set of the inverse wavelet transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_gegenbauer, roots_jacobi

from .errors import DomainError, QuadratureError
from .special_functions import SphereContext, sphere_area


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights for int_{-1}^{1} f(t) (1-t^2)^(lambda-1/2) dt."""

    nodes: np.ndarray
    weights: np.ndarray
    lam: float
    degree: int  # polynomial exactness

    def integrate(self, fvals_or_callable):
        f = fvals_or_callable(self.nodes) if callable(fvals_or_callable) else np.asarray(fvals_or_callable)
        return float(np.dot(self.weights, f))

    @property
    def total_weight_exact(self) -> float:
        """int (1-t^2)^(lambda-1/2) dt = sqrt(pi) Gamma(lambda+1/2) / Gamma(lambda+1)."""
        return math.sqrt(math.pi) * math.gamma(self.lam + 0.5) / math.gamma(self.lam + 1.0)


def gauss_gegenbauer(lam: float, count: int) -> QuadratureRule:
    """Gauss rule of the given node count for weight (1-t^2)^(lambda-1/2).

    This is the Jacobi weight with alpha = beta = lambda - 1/2; exact for
    polynomials of degree <= 2*count - 1.
    """
    if lam < 0.5:
        raise DomainError(f"lambda must be >= 1/2 (n >= 2), got {lam}")
    if count < 1:
        raise DomainError(f"node count must be >= 1, got {count}")
    try:
        nodes, weights = roots_gegenbauer(count, lam)
    except Exception as exc:  # pragma: no cover - scipy failure is exotic
        raise QuadratureError(f"Gegenbauer rule construction failed: {exc}") from exc
    if not (np.all(np.isfinite(nodes)) and np.all(weights > 0)):
        raise QuadratureError("Gegenbauer rule returned non-finite nodes or non-positive weights")
    return QuadratureRule(nodes=nodes, weights=weights, lam=float(lam), degree=2 * count - 1)


def gauss_jacobi(alpha: float, beta: float, count: int):
    """Thin wrapper over scipy's Jacobi rule for weight (1-s)^alpha (1+s)^beta.

    Used for the inner longitude integral of zonal-zonal convolutions, whose
    weight sin^(2 lambda - 1) phi corresponds to alpha = beta = lambda - 1.
    """
    if count < 1:
        raise DomainError(f"node count must be >= 1, got {count}")
    nodes, weights = roots_jacobi(count, alpha, beta)
    return nodes, weights


@dataclass(frozen=True)
class ScaleGrid:
    """Log-uniform scale nodes with trapezoid weights in log a.

    sum(weights * f(nodes)) approximates int_{a_min}^{a_max} f(a) da/a.
    """

    a_min: float
    a_max: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def count(self) -> int:
        return self.nodes.size

    def integrate(self, fvals_or_callable):
        f = fvals_or_callable(self.nodes) if callable(fvals_or_callable) else np.asarray(fvals_or_callable)
        return float(np.dot(self.weights, f))


def log_scale_grid(a_min: float, a_max: float, count: int) -> ScaleGrid:
    """Nodes a_i = a_min (a_max/a_min)^(i/(count-1)), trapezoid in log a."""
    if not (0.0 < a_min < a_max):
        raise DomainError(f"need 0 < a_min < a_max, got [{a_min}, {a_max}]")
    if count < 2:
        raise DomainError(f"scale grid needs >= 2 points, got {count}")
    nodes = np.geomspace(a_min, a_max, count)
    du = math.log(a_max / a_min) / (count - 1)
    weights = np.full(count, du)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return ScaleGrid(a_min=float(a_min), a_max=float(a_max), nodes=nodes, weights=weights)


def integrate_zonal(ctx: SphereContext, f, count: int = 200) -> float:
    """int_{S^n} f(<e, y>) dsigma(y) for zonal f given as a callable of t.

    Reduces to Sigma_{n-1} * int_{-1}^{1} f(t) (1-t^2)^(lambda-1/2) dt.
    """
    rule = gauss_gegenbauer(ctx.lam, count)
    return ctx.sigma_n_minus_1 * rule.integrate(f)


def convolve_zonal(ctx: SphereContext, f, g, t_out, theta_count: int = 160, phi_count: int = 160):
    """Sigma_n-normalized convolution of two zonal functions, by quadrature.

    (f * g)(cos gamma) = (1/Sigma_n) int_{S^n} f(<e, y>) g(<x, y>) dsigma(y)
    with <e, x> = cos gamma reduces, in the coordinates (theta, phi) of y,
    to the double integral

        (Sigma_{n-2} / Sigma_n) *
        int_0^pi int_0^pi f(cos theta)
            g(cos gamma cos theta + sin gamma sin theta cos phi)
            sin^(2 lambda) theta  sin^(2 lambda - 1) phi  dtheta dphi.

    The theta factor is the Gegenbauer weight; the phi factor is the Jacobi
    weight with alpha = beta = lambda - 1.  Serves as the independent spatial
    oracle for the spectral transform path; f and g must be callables of the
    cosine argument.
    """
    t_out = np.atleast_1d(np.asarray(t_out, dtype=float))
    theta_rule = gauss_gegenbauer(ctx.lam, theta_count)
    phi_nodes, phi_weights = gauss_jacobi(ctx.lam - 1.0, ctx.lam - 1.0, phi_count)

    cos_theta = theta_rule.nodes                       # (T,)
    sin_theta = np.sqrt(1.0 - cos_theta**2)
    f_vals = np.asarray(f(cos_theta))                  # (T,)

    sin_gamma = np.sqrt(np.clip(1.0 - t_out**2, 0.0, None))
    # rotated cosine: (out, T, P)
    arg = (
        t_out[:, None, None] * cos_theta[None, :, None]
        + sin_gamma[:, None, None] * sin_theta[None, :, None] * phi_nodes[None, None, :]
    )
    g_vals = np.asarray(g(np.clip(arg, -1.0, 1.0)))
    inner = g_vals @ phi_weights                       # (out, T)
    outer = inner @ (theta_rule.weights * f_vals)      # (out,)
    prefactor = sphere_area(ctx.n - 2) / ctx.sigma_n
    return prefactor * outer
