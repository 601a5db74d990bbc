"""Robust sparse linear regression: MM-Lasso and adaptive MM-Lasso."""

from ._mmlasso import (
    asymptotic_constants,
    fit,
    generate_scenario,
    median,
    monte_carlo,
    mscale,
    norm_mad,
    oracle_covariance,
    psi,
    psi_prime,
    rho,
    rho_weight,
    tau_scale,
    tune_for_efficiency,
    tune_for_scale_consistency,
)

__all__ = [
    "asymptotic_constants",
    "fit",
    "generate_scenario",
    "median",
    "monte_carlo",
    "mscale",
    "norm_mad",
    "oracle_covariance",
    "psi",
    "psi_prime",
    "rho",
    "rho_weight",
    "tau_scale",
    "tune_for_efficiency",
    "tune_for_scale_consistency",
]
