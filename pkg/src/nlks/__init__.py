"""Pseudo-spectral solver for the nonlocal Kuramoto-Sivashinsky equation

    u_t + u_xxxx + u_xx + u u_x + alpha H(u_xxx) = 0

on zero-mean periodic functions, with tools for comparing it to the local
equation (alpha = 0).
"""

from .analysis import (
    AttractorReport,
    AttractorSample,
    BoundCheck,
    ConvergenceReport,
    GronwallConstants,
    NormEstimates,
    PropertyCheck,
    PropertyReport,
    ScalingFit,
    alpha_sweep,
    attractor_distances,
    bound_check_with_refinement,
    check_inequalities,
    fit_scaling,
    gronwall_bound,
    hausdorff_semidistance,
    measure_uniform_bounds,
    run_difference,
    sample_attractor,
    trajectory_difference,
    verify_bound,
)
from .dynamics import (
    LinearSymbol,
    SolverParams,
    StepperState,
    classical_rhs,
    integrate,
    iterate,
    linear_symbol,
    local_ks_symbol,
    make_stepper,
    nonlinear_term,
    rhs,
    step_etdrk4,
)
from .errors import BlowUpError, ConfigurationError, InvariantViolation, NLKSError
from .io import RunConfig, load_config, read_norms, write_norms
from .series import NormSeries
from .spectral import (
    DomainConfig,
    RealField,
    SpectralField,
    derivative,
    h1_norm,
    h2_norm,
    hilbert,
    inner_product,
    l2_norm,
    linf_norm,
    random_field,
    resample,
    to_real,
    to_spectral,
)

__version__ = "0.1.0"
