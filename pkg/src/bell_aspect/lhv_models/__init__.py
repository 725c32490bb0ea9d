"""Define hidden-variable models, estimate their statistics and check their locality."""

from .builtins import (
    DEFAULT_NOISE_RATE,
    ParameterSpec,
    ParametricFamily,
    available_families,
    available_models,
    bell_sign_detector_noise_model,
    bell_sign_frame_shift_model,
    bell_sign_model,
    builtin_model,
    parametric_family,
    qm_mimic_nonlocal_model,
    threshold_model,
)
from .checks import (
    CheckReport,
    check_detector_independence,
    check_frame_independence,
    check_no_signaling,
    check_surface_coincidence,
)
from .estimation import correlation_by_quadrature, distribution_from_counts, estimate_distribution
from .framework import (
    LambdaBatch,
    LambdaSample,
    LhvModel,
    LocalityTag,
    RemoteSide,
    respond,
    respond_batch,
    sample_lambda,
)

__all__ = [
    "DEFAULT_NOISE_RATE",
    "CheckReport",
    "LambdaBatch",
    "LambdaSample",
    "LhvModel",
    "LocalityTag",
    "ParameterSpec",
    "ParametricFamily",
    "RemoteSide",
    "available_families",
    "available_models",
    "bell_sign_detector_noise_model",
    "bell_sign_frame_shift_model",
    "bell_sign_model",
    "builtin_model",
    "check_detector_independence",
    "check_frame_independence",
    "check_no_signaling",
    "check_surface_coincidence",
    "correlation_by_quadrature",
    "distribution_from_counts",
    "estimate_distribution",
    "parametric_family",
    "qm_mimic_nonlocal_model",
    "respond",
    "respond_batch",
    "sample_lambda",
    "threshold_model",
]
