"""Sharp Poincare-type inequality for vector fields on the 2-sphere.

Builds real vector spherical harmonics, evaluates the penalized surface
energy both by quadrature and in coefficient space, recovers the sharp
constant by block eigenproblems, constructs the exact equality family,
and probes the stability of the normal states by constrained gradient
flow.
"""

__version__ = "0.1.0"

from .eigensolver import SpectralBlock, block, gamma_numeric, min_eigenpair, numeric_minimizer
from .flow import (
    FlowResult,
    FlowState,
    distance_to_normals,
    el_residual,
    gradient_flow,
    project_tangent,
    second_variation_normal,
)
from .grid import (
    Grid,
    SampledScalarField,
    SampledVectorField,
    build_grid,
    dirichlet_energy_scalar_route,
    inner_product,
    integrate,
    normal_field,
    scalar_analyze,
    tangent_frame,
    verification_grid,
)
from .legendre import (
    assoc_legendre,
    assoc_legendre_dt,
    normalized_legendre,
    scalar_sh,
    scalar_sh_grad_components,
)
from .sharp import (
    MinimizerSpec,
    Regime,
    build_minimizer,
    classify_regime,
    equality_residual,
    gamma,
    gamma_plus,
    membership_check,
    shifted_constant,
)
from .spectral import (
    EnergyBreakdown,
    anisotropy_energy,
    dirichlet_energy,
    energy_report,
    g_kappa,
    norm_sq,
)
from .vsh import CoeffSet, ModeIndex, analyze, eval_vsh, random_coeffs, synthesize

__all__ = [
    "__version__",
    "SpectralBlock",
    "block",
    "gamma_numeric",
    "min_eigenpair",
    "numeric_minimizer",
    "FlowResult",
    "FlowState",
    "distance_to_normals",
    "el_residual",
    "gradient_flow",
    "project_tangent",
    "second_variation_normal",
    "Grid",
    "SampledScalarField",
    "SampledVectorField",
    "build_grid",
    "dirichlet_energy_scalar_route",
    "inner_product",
    "integrate",
    "normal_field",
    "scalar_analyze",
    "tangent_frame",
    "verification_grid",
    "assoc_legendre",
    "assoc_legendre_dt",
    "normalized_legendre",
    "scalar_sh",
    "scalar_sh_grad_components",
    "MinimizerSpec",
    "Regime",
    "build_minimizer",
    "classify_regime",
    "equality_residual",
    "gamma",
    "gamma_plus",
    "membership_check",
    "shifted_constant",
    "EnergyBreakdown",
    "anisotropy_energy",
    "dirichlet_energy",
    "energy_report",
    "g_kappa",
    "norm_sq",
    "CoeffSet",
    "ModeIndex",
    "analyze",
    "eval_vsh",
    "random_coeffs",
    "synthesize",
]
