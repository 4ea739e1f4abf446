"""Numerical laboratory for u_t - nu*Lap(u) + |grad u|^q = 0 with rough data."""

from .constants import DerivedConstants, derived_constants
from .estimates import (
    ApproximationReport,
    EstimateReport,
    VssLimitReport,
    check_first_smoothing,
    check_growth_bound,
    check_local_mass,
    check_local_sup,
    check_second_smoothing,
    check_universal_gradient,
    gradient_slack,
    monotone_approximation_experiment,
    verify_constant_stability,
    vss_limit_experiment,
)
from .grid import (
    Field,
    Geometry,
    ball_integral,
    ball_norm,
    gradient,
    inner_half_slice,
    laplacian,
    total_mass,
)
from .initial_data import bump, constant, dirac, power_growth, power_singular
from .rates import (
    RatesReport,
    fit_power_law,
    slope_bound_first,
    slope_bound_second,
    smoothing_rate_experiment,
)
from .selfsimilar import (
    ProfileSolution,
    assemble,
    assembled_residual,
    profile_rhs,
    shoot,
    solve_nonuniq,
    solve_vss,
    stationary_residual,
)
from .solver import (
    ProblemSpec,
    Trajectory,
    compare_runs,
    hopf_cole_convergence,
    hopf_cole_reference,
    run,
)
from .supersolution import (
    CertificationReport,
    SupersolutionSpec,
    build_phi,
    first_eigen,
    psi_h,
    scaled_supersolution,
    supersolution_residual,
)

__version__ = "0.1.0"

__all__ = [
    "DerivedConstants",
    "derived_constants",
    "ApproximationReport",
    "EstimateReport",
    "VssLimitReport",
    "check_first_smoothing",
    "check_growth_bound",
    "check_local_mass",
    "check_local_sup",
    "check_second_smoothing",
    "check_universal_gradient",
    "gradient_slack",
    "monotone_approximation_experiment",
    "verify_constant_stability",
    "vss_limit_experiment",
    "Field",
    "Geometry",
    "ball_integral",
    "ball_norm",
    "gradient",
    "inner_half_slice",
    "laplacian",
    "total_mass",
    "bump",
    "constant",
    "dirac",
    "power_growth",
    "power_singular",
    "RatesReport",
    "fit_power_law",
    "slope_bound_first",
    "slope_bound_second",
    "smoothing_rate_experiment",
    "ProfileSolution",
    "assemble",
    "assembled_residual",
    "profile_rhs",
    "shoot",
    "solve_nonuniq",
    "solve_vss",
    "stationary_residual",
    "ProblemSpec",
    "Trajectory",
    "compare_runs",
    "hopf_cole_convergence",
    "hopf_cole_reference",
    "run",
    "CertificationReport",
    "SupersolutionSpec",
    "build_phi",
    "first_eigen",
    "psi_h",
    "scaled_supersolution",
    "supersolution_residual",
    "__version__",
]
