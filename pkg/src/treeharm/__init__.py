"""Harmonic analysis on semi-homogeneous trees.

Radial convolution algebra, spherical functions, boundary integrals,
L^p classification and spectra of the radial generator.
"""
from __future__ import annotations

from .boundary import (
    BoundaryPartition,
    index_strata,
    partition_with_indices,
    poisson_kernel_value,
    poisson_moment_exact,
    spherical_via_boundary,
)
from .errors import (
    BallTooSmallError,
    BudgetExceededError,
    ClassificationUnavailableError,
    InvalidParameterError,
    KernelUndefinedError,
    NonRadialError,
    NotRefinedError,
    SingularParameterError,
    TreeHarmError,
)
from .intervals import IntervalUnion
from .kernels import BACKEND
from .radial import (
    GeneratorPolynomial,
    RadialFunction,
    adjoint,
    convolve,
    convolve_oracle,
    expand_in_generator,
    integrate,
    mu,
    radial_from_dict,
    radial_to_dict,
)
from .spectra import (
    NestingReport,
    critical_lower_bound,
    full_spectrum,
    lp_spectrum,
    nesting_report,
    sampled_image,
)
from .spherical import (
    LpVerdict,
    PDReport,
    c_coeff,
    eigen_residual,
    gamma,
    h_eval,
    lp_class,
    param_set_P,
    pd_check,
    spherical_eval,
)
from .tree import (
    BallEnumeration,
    Cylinder,
    TreeParams,
    VertexAddress,
    cylinders_at_depth,
    distance,
    enumerate_ball,
    horocycle_index,
    make_tree_params,
    sphere_size,
)

__version__ = "0.1.0"

__all__ = [
    "adjoint",
    "BACKEND",
    "BallEnumeration",
    "BallTooSmallError",
    "BoundaryPartition",
    "BudgetExceededError",
    "c_coeff",
    "ClassificationUnavailableError",
    "convolve",
    "convolve_oracle",
    "critical_lower_bound",
    "Cylinder",
    "cylinders_at_depth",
    "distance",
    "eigen_residual",
    "enumerate_ball",
    "expand_in_generator",
    "full_spectrum",
    "gamma",
    "GeneratorPolynomial",
    "h_eval",
    "horocycle_index",
    "index_strata",
    "integrate",
    "IntervalUnion",
    "InvalidParameterError",
    "KernelUndefinedError",
    "lp_class",
    "lp_spectrum",
    "LpVerdict",
    "make_tree_params",
    "mu",
    "nesting_report",
    "NestingReport",
    "NonRadialError",
    "NotRefinedError",
    "param_set_P",
    "partition_with_indices",
    "pd_check",
    "PDReport",
    "poisson_kernel_value",
    "poisson_moment_exact",
    "radial_from_dict",
    "radial_to_dict",
    "RadialFunction",
    "sampled_image",
    "SingularParameterError",
    "sphere_size",
    "spherical_eval",
    "spherical_via_boundary",
    "TreeHarmError",
    "TreeParams",
    "VertexAddress",
]
