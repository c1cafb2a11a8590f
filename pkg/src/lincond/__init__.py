"""Lin's function machinery for products of positive random variables.

The package computes Lin's function L_f(x) = -x f'(x)/f(x) for analytic
density families and arbitrary callables, verifies that products of
independent factors keep L monotone with the half-min lower bound, and
constructs the dependent-product perturbation whose Lin function
oscillates with prescribed slopes.
"""

from .densities import DensityModel, parse_density
from .errors import (
    ConfigError,
    DomainError,
    LinCondError,
    NegativeDensity,
    NoIntersection,
    NonConvergence,
    NonFiniteEvaluation,
    SearchBudgetExceeded,
    ZeroDensity,
)
from .lin_analysis import (
    LinConditionReport,
    check_lin_condition,
    lin_function,
    tau_derivative_identity_check,
    tau_ratio,
)
from .product import (
    BoundCheck,
    ProductDensity,
    lin_of_product_form_A,
    lin_of_product_form_B,
    positivity_integrand_check,
    product_pdf,
    theorem1_lower_bound_check,
    theorem1_monotonicity_scan,
)
from .counterexample import (
    CutoffSpec,
    JointDensityModel,
    PerturbationBlock,
    WindowAnalysis,
    cutoff_q,
    dependent_product_pdf,
    hyperbola_circle_intersections,
    joint_pdf,
    limsup_liminf_demo,
    make_block,
    marginal_check,
    middle_integral_closed_form,
    phi,
    rho,
    slope_search,
)
from .quadrature import (
    QuadratureResult,
    QuadratureSpec,
    differentiate,
    integrate_finite,
    integrate_halfline,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "ConfigError",
    "CutoffSpec",
    "DensityModel",
    "DomainError",
    "JointDensityModel",
    "LinCondError",
    "LinConditionReport",
    "NegativeDensity",
    "NoIntersection",
    "NonConvergence",
    "NonFiniteEvaluation",
    "PerturbationBlock",
    "ProductDensity",
    "QuadratureResult",
    "QuadratureSpec",
    "SearchBudgetExceeded",
    "WindowAnalysis",
    "ZeroDensity",
    "check_lin_condition",
    "cutoff_q",
    "dependent_product_pdf",
    "differentiate",
    "hyperbola_circle_intersections",
    "integrate_finite",
    "integrate_halfline",
    "joint_pdf",
    "limsup_liminf_demo",
    "lin_function",
    "lin_of_product_form_A",
    "lin_of_product_form_B",
    "make_block",
    "marginal_check",
    "middle_integral_closed_form",
    "parse_density",
    "phi",
    "positivity_integrand_check",
    "product_pdf",
    "rho",
    "slope_search",
    "tau_derivative_identity_check",
    "tau_ratio",
    "theorem1_lower_bound_check",
    "theorem1_monotonicity_scan",
]
