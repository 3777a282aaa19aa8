"""Poisson wavelets on n-dimensional unit spheres.

Evaluation of the order-m Poisson wavelets through four mathematically
equivalent representations (Gegenbauer series, closed rational form, harmonic
continuation, multipole sums), exact integer coefficient tables for the
closed form, continuous bilinear/linear wavelet transforms with inversion and
reproducing kernels, and the small-scale (Euclidean) limit machinery with
localization statistics.
"""

from .asymptotics import (
    EuclideanProfile,
    decay_slope,
    euclidean_convergence_report,
    euclidean_limit,
    flat_measure_density,
    localization_report,
    pullback_residual,
    stereographic_colatitude,
    zero_mean_check,
)
from .coefficients import (
    AlphaTable,
    RTable,
    build_alpha_table,
    build_r_table,
    operator_identity_check,
    stirling_second_kind,
)
from .errors import (
    DomainError,
    InvalidContextError,
    QuadratureError,
    SingularityError,
    TruncationError,
)
from .kernels import (
    OffSpherePoint,
    SourcePoint,
    monopole_field,
    multipole_field_closed,
    multipole_field_series,
    poisson_kernel,
    stable_denominator,
)
from .quadrature import (
    QuadratureRule,
    ScaleGrid,
    convolve_zonal,
    gauss_gegenbauer,
    gauss_jacobi,
    integrate_zonal,
    log_scale_grid,
)
from .special_functions import (
    SphereContext,
    gegenbauer,
    gegenbauer_at_one,
    gegenbauer_sequence,
    harmonic_dimension,
    reproducing_kernel,
    sphere_area,
)
from .transform import (
    TransformField,
    ZonalFunction,
    admissibility_report,
    degree_norms,
    forward_spatial,
    forward_spectral,
    invert_bilinear,
    invert_bilinear_spatial,
    invert_linear,
    predicted_degree_factor,
    random_zonal,
    reproducing_kernel_pi,
    spectral_multiplier,
)
from .wavelets import (
    FLAVORS,
    REPRESENTATIONS,
    WaveletSpec,
    eval_closed,
    eval_continuation,
    eval_multipole_sum,
    eval_series,
    evaluate,
    evaluate_all,
    flavor_scale,
)
from .wavelets import filter as filter_profile

__version__ = "0.1.0"

__all__ = [
    "AlphaTable",
    "DomainError",
    "EuclideanProfile",
    "FLAVORS",
    "InvalidContextError",
    "OffSpherePoint",
    "QuadratureError",
    "QuadratureRule",
    "REPRESENTATIONS",
    "RTable",
    "ScaleGrid",
    "SingularityError",
    "SourcePoint",
    "SphereContext",
    "TransformField",
    "TruncationError",
    "WaveletSpec",
    "ZonalFunction",
    "admissibility_report",
    "build_alpha_table",
    "build_r_table",
    "convolve_zonal",
    "decay_slope",
    "degree_norms",
    "euclidean_convergence_report",
    "euclidean_limit",
    "eval_closed",
    "eval_continuation",
    "eval_multipole_sum",
    "eval_series",
    "evaluate",
    "evaluate_all",
    "filter_profile",
    "flat_measure_density",
    "flavor_scale",
    "forward_spatial",
    "forward_spectral",
    "gauss_gegenbauer",
    "gauss_jacobi",
    "gegenbauer",
    "gegenbauer_at_one",
    "gegenbauer_sequence",
    "harmonic_dimension",
    "integrate_zonal",
    "invert_bilinear",
    "invert_bilinear_spatial",
    "invert_linear",
    "localization_report",
    "log_scale_grid",
    "monopole_field",
    "multipole_field_closed",
    "multipole_field_series",
    "operator_identity_check",
    "poisson_kernel",
    "predicted_degree_factor",
    "pullback_residual",
    "random_zonal",
    "reproducing_kernel",
    "reproducing_kernel_pi",
    "spectral_multiplier",
    "sphere_area",
    "stable_denominator",
    "stereographic_colatitude",
    "stirling_second_kind",
    "zero_mean_check",
]
