"""
sltbeta
=======

Delay-discounting rate estimation by nonlinear least squares, beta
regression, and scale-location truncated (SLT) beta regression, with Monte
Carlo tools for counting out-of-bounds simulated indifference points.
"""
__version__ = "0.1.0"

from .discounting import hyperbolic_mean
from .distributions import (
    DEFAULT_SLT,
    IDENTITY_SLT,
    BetaMeanScale,
    BetaShape,
    SltConfig,
    beta_pdf,
    beta_variance,
    sample_beta,
    sample_normal,
    sample_slt_beta,
    slt_cdf,
    slt_log_pdf,
    slt_pdf,
)
from .errors import (
    BoundaryValueError,
    ConfigError,
    DataError,
    DomainError,
    EmptyDatasetError,
    NotConvergedError,
    SltBetaError,
)
from .estimation import (
    FitFailure,
    FitOptions,
    FitResult,
    IndifferenceSeries,
    Method,
    fit_beta,
    fit_many,
    fit_nls,
    fit_slt_beta,
    model_variance_by_delay,
)
from .optimize import optimize
from .reporting import agreement_scatter, empirical_variance_by_delay, summarize_lnk
from .screening import ScreenResult, johnson_bickel_screen
from .simulation import SimulationReport, SubjectGenerator, run_monte_carlo, simulate_subject
from .special import log_gamma, regularized_incomplete_beta
