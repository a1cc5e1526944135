"""Wideband outage exponents for slow-fading parallel channels.

Given many parallel channels and a fixed energy budget per information
nat, outage probability decays exponentially in the number of channels
once the budget clears the channel's wideband minimum.  This package
computes those minimum energies and decay exponents for scalar fading
families, correlated MIMO links and one-bit feedback protocols, checks
them against closed forms, and estimates them by Monte Carlo.
"""

from ._backend import BACKEND as kernel_backend
from .errors import (
    BelowEtaBarError,
    DomainError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidParamError,
    NoConvergenceError,
    NotHermitianError,
    WidebandOutageError,
    ZeroMeanError,
)
from .fading import (
    ScalarFadingModel,
    closed_form_exponent,
    log_mgf,
    sample_squared_gain,
    sample_squared_gains,
)
from .feedback import (
    FeedbackProtocol,
    MeshPoint,
    all_weak_exponent,
    feedback_eta_bar,
    general_exponent,
    mesh,
    onoff_envelope,
    onoff_exponent,
    weak_fraction_exponent,
)
from .ldp import (
    ExponentResult,
    LogMgf,
    Status,
    eta_bar,
    rate_function,
    wideband_exponent,
)
from .mimo import (
    CovariancePair,
    EigResult,
    correlated_exponent,
    correlated_log_mgf,
    hermitian_eigenvalues,
    stationary_lambda,
    two_antenna_asymptote,
    two_antenna_exponent,
    two_antenna_shaping,
    white_exponent,
    white_log_mgf,
)
from .montecarlo import (
    OutageEstimate,
    SimulationConfig,
    SlopeFit,
    estimate_outage,
    fit_slope,
    gamma_oracle,
    regularized_gamma_p,
    sample_truncated_exp,
    simulate_feedback_rates,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "WidebandOutageError",
    "ZeroMeanError",
    "NoConvergenceError",
    "InvalidParamError",
    "NotHermitianError",
    "BelowEtaBarError",
    "DomainError",
    "InvalidConfigError",
    "InsufficientDataError",
    "Status",
    "LogMgf",
    "ExponentResult",
    "eta_bar",
    "wideband_exponent",
    "rate_function",
    "ScalarFadingModel",
    "log_mgf",
    "closed_form_exponent",
    "sample_squared_gain",
    "sample_squared_gains",
    "FeedbackProtocol",
    "feedback_eta_bar",
    "onoff_exponent",
    "onoff_envelope",
    "all_weak_exponent",
    "weak_fraction_exponent",
    "general_exponent",
    "MeshPoint",
    "mesh",
    "EigResult",
    "hermitian_eigenvalues",
    "CovariancePair",
    "white_log_mgf",
    "white_exponent",
    "correlated_log_mgf",
    "correlated_exponent",
    "stationary_lambda",
    "two_antenna_exponent",
    "two_antenna_shaping",
    "two_antenna_asymptote",
    "SimulationConfig",
    "OutageEstimate",
    "SlopeFit",
    "wilson_interval",
    "estimate_outage",
    "simulate_feedback_rates",
    "fit_slope",
    "regularized_gamma_p",
    "gamma_oracle",
    "sample_truncated_exp",
    "__version__",
]
