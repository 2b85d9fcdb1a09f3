"""
Gaussian generative model of P300 trials and the session simulator.
"""
from core.simulation.gaussian_model import (
    CovarianceStructure,
    GaussianP300Model,
    ar1_covariance,
    build_model,
    make_synthetic_model,
    theoretical_snr,
)
from core.simulation.session import SessionConfig, SessionData, Trial, random_symbols
from core.simulation.simulator import (
    sample_trial,
    sample_trials,
    simulate_session,
    symbol_generators,
)

__all__ = [
    "CovarianceStructure",
    "GaussianP300Model",
    "SessionConfig",
    "SessionData",
    "Trial",
    "ar1_covariance",
    "build_model",
    "make_synthetic_model",
    "random_symbols",
    "sample_trial",
    "sample_trials",
    "simulate_session",
    "symbol_generators",
    "theoretical_snr",
]
