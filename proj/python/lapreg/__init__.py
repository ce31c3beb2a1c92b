"""Frechet regression for network responses represented as graph Laplacians."""

from lapreg._core import (
    LapregError,
    Model,
    distance,
    fit,
    frechet_mean,
    load_model,
    matrix_power,
    project_laplacian,
    project_psd,
    simulate,
    sym_eigen,
    true_target,
    validate_laplacian,
    __version__,
)

__all__ = [
    "LapregError",
    "Model",
    "distance",
    "fit",
    "frechet_mean",
    "load_model",
    "matrix_power",
    "project_laplacian",
    "project_psd",
    "simulate",
    "sym_eigen",
    "true_target",
    "validate_laplacian",
    "__version__",
]
