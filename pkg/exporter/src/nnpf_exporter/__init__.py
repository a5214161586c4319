"""Keras-to-NNPF export tooling and fixture training."""

from .container import Container, read, write
from .export import (ExportManifest, UnsupportedLayerError, emit_reference,
                     export_bnn, export_dnn, softplus64)
from .fixtures import make_sigma_zero, train_fixtures
from .layers import DenseReparam
from .metadata import load_metadata, save_metadata

__version__ = "0.1.0"

__all__ = [
    "Container",
    "DenseReparam",
    "ExportManifest",
    "UnsupportedLayerError",
    "emit_reference",
    "export_bnn",
    "export_dnn",
    "load_metadata",
    "make_sigma_zero",
    "read",
    "save_metadata",
    "softplus64",
    "train_fixtures",
    "write",
]
