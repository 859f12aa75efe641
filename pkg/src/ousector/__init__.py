"""Numerical checks for the complex-time Ornstein-Uhlenbeck semigroup on L^p(μ).

The semigroup e^{-zL} is evaluated through its Mehler kernel.  The package
certifies the finitely checkable steps behind R-sectoriality of angle
θ_p = arcsin|1 - 2/p|: the sector geometry of the time domain, Gaussian
domination of the conjugated kernel, the resulting L^1 bounds, and
discretized operator norms.  A Hermite spectral oracle provides independent
reference values.

Hot pairwise loops run in a compiled extension when one is built, and fall
back to numpy otherwise (see ``ousector._backend``).
"""
from ._backend import BACKEND
from .domination import (
    DominationReport,
    SupBoundReport,
    chain_bound,
    check_domination,
    g_l1_closed_form,
    g_l1_quadrature,
    g_value,
    margin,
    sup_integral_bound,
)
from .errors import OUSectorError
from .grid import GridFunction, GridSpec
from .hermite import (
    HermiteExpansion,
    apply_semigroup_spectral,
    expand_mu,
    gauss_hermite,
    hermite_value,
    synthesize,
)
from .mehler import (
    analyticity_residual,
    apply_semigroup_quadrature,
    conjugated_kernel,
    mehler,
    mehler_alt,
    u_p_apply,
    u_p_invert,
)
from .operator_norms import (
    BlowupReport,
    NormEstimate,
    blowup_scan,
    contraction_check,
    kernel_matrix,
    operator_norm_estimate,
    p_norm_upper,
    trial_ratio_gaussian,
)
from .sector_geometry import (
    CalculusParams,
    DomainSpec,
    compute_params,
    domain_map_raster,
    in_E,
    in_E_eps_delta,
    in_sector,
    s_map,
    verify_sector_containment,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlowupReport",
    "CalculusParams",
    "DomainSpec",
    "DominationReport",
    "GridFunction",
    "GridSpec",
    "HermiteExpansion",
    "NormEstimate",
    "OUSectorError",
    "SupBoundReport",
    "analyticity_residual",
    "apply_semigroup_quadrature",
    "apply_semigroup_spectral",
    "blowup_scan",
    "chain_bound",
    "check_domination",
    "compute_params",
    "conjugated_kernel",
    "contraction_check",
    "domain_map_raster",
    "expand_mu",
    "g_l1_closed_form",
    "g_l1_quadrature",
    "g_value",
    "gauss_hermite",
    "hermite_value",
    "in_E",
    "in_E_eps_delta",
    "in_sector",
    "kernel_matrix",
    "margin",
    "mehler",
    "mehler_alt",
    "operator_norm_estimate",
    "p_norm_upper",
    "s_map",
    "sup_integral_bound",
    "synthesize",
    "trial_ratio_gaussian",
    "u_p_apply",
    "u_p_invert",
    "verify_sector_containment",
]
