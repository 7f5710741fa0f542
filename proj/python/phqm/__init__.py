"""Pseudo-Hermitian generating functionals in a truncated oscillator basis."""

from ._core import (
    BasisSpec,
    BiorthonormalSystem,
    ConfigError,
    CubicModel,
    Error,
    NumericalError,
    ShiftedModel,
    __version__,
    diagonalize,
    fit_order,
    metric,
    oscillator_ops,
    path_integral_Z,
    quartic_family,
    run_config,
    sweep_config,
    verify_all,
)

__all__ = [
    "BasisSpec",
    "BiorthonormalSystem",
    "ConfigError",
    "CubicModel",
    "Error",
    "NumericalError",
    "ShiftedModel",
    "__version__",
    "diagonalize",
    "fit_order",
    "metric",
    "oscillator_ops",
    "path_integral_Z",
    "quartic_family",
    "run_config",
    "sweep_config",
    "verify_all",
]
