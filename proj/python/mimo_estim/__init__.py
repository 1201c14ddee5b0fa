"""Channel estimators and covariance models for massive MIMO arrays."""

from ._core import (
    ArrayGeometry,
    ConvergenceError,
    DegenerateInput,
    InvalidInput,
    PilotConfig,
    analytic_nmse,
    array_response,
    default_config_toml,
    estimate_covariance,
    estimator_matrix,
    experiment_names,
    iso_correlation,
    kba_factors,
    kronecker_product,
    nkp_factors,
    nsae_r,
    run_experiment,
    synthesize_correlation,
    theoretical_counts,
)

__all__ = [
    "ArrayGeometry",
    "ConvergenceError",
    "DegenerateInput",
    "InvalidInput",
    "PilotConfig",
    "analytic_nmse",
    "array_response",
    "default_config_toml",
    "estimate_covariance",
    "estimator_matrix",
    "experiment_names",
    "iso_correlation",
    "kba_factors",
    "kronecker_product",
    "nkp_factors",
    "nsae_r",
    "run_experiment",
    "synthesize_correlation",
    "theoretical_counts",
]
