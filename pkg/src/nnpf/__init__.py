"""Native inference for feed-forward and mean-field Bayesian neural networks.

Models travel in a single portable container (magic + JSON manifest +
float64 tensor payload).  The deterministic engine reproduces
training-framework predictions to tight tolerance; the Bayesian engine
adds seeded Monte Carlo uncertainty on top of the same forward kernel.
"""

from .activations import ACTIVATION_ORDER, activate
from .bnn import BnnRegressor, PredictiveResult, predictive_stats
from .datasets import generate, generate_split, nonlinear3_surface, sinusoid_surface
from .dnn import DnnRegressor
from .errors import (
    ManifestError,
    ModelKindError,
    ModelValidationError,
    NnpfError,
    NotNnpfError,
    ShapeMismatchError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)
from .format import (
    FORMAT_VERSION,
    BayesianLayer,
    DeterministicLayer,
    ModelArtifact,
    ModelSpec,
    Standardizer,
    load_model,
    parse_model,
    save_model,
    serialize_model,
    validate,
)
from .metrics import (
    MetricsReport,
    ResidualDistribution,
    compute_metrics,
    diff_reports,
    residual_distribution,
    summarize_residual_center,
)
from .netmath import affine, standardize, unstandardize
from .rng import Rng

__version__ = "0.1.0"

__all__ = [
    "ACTIVATION_ORDER",
    "activate",
    "affine",
    "standardize",
    "unstandardize",
    "Rng",
    "FORMAT_VERSION",
    "ModelSpec",
    "ModelArtifact",
    "DeterministicLayer",
    "BayesianLayer",
    "Standardizer",
    "parse_model",
    "serialize_model",
    "validate",
    "load_model",
    "save_model",
    "DnnRegressor",
    "BnnRegressor",
    "PredictiveResult",
    "predictive_stats",
    "MetricsReport",
    "ResidualDistribution",
    "compute_metrics",
    "diff_reports",
    "residual_distribution",
    "summarize_residual_center",
    "generate",
    "generate_split",
    "sinusoid_surface",
    "nonlinear3_surface",
    "NnpfError",
    "NotNnpfError",
    "UnsupportedVersionError",
    "ManifestError",
    "TruncatedPayloadError",
    "ModelValidationError",
    "ShapeMismatchError",
    "ModelKindError",
]
