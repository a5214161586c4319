"""Deterministic feed-forward inference engine.

Wraps a parsed model artifact in a scikit-learn style estimator: the
weights come from the container, so ``fit`` is a pipeline-compatibility
no-op and ``predict`` runs standardize -> affine+activation layers ->
unstandardize through the jitted kernel.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from . import _kernels
from .activations import ACTIVATION_IDS
from .errors import ModelValidationError
from .format import ModelArtifact, load_model, require_kind, validate
from .validation import as_float_matrix, as_float_vector, require_finite


def pack_widths(spec) -> tuple:
    widths = np.asarray(spec.layer_widths, dtype=np.int64)
    act_ids = np.asarray([ACTIVATION_IDS[a] for a in spec.activations], dtype=np.int64)
    return widths, act_ids


def pack_standardizer(artifact) -> tuple:
    s = artifact.standardizer
    if s is None:
        empty = np.empty(0, dtype=np.float64)
        return False, empty, empty, empty, empty
    return (
        True,
        np.ascontiguousarray(s.x_mean, dtype=np.float64),
        np.ascontiguousarray(s.x_std, dtype=np.float64),
        np.ascontiguousarray(s.y_mean, dtype=np.float64),
        np.ascontiguousarray(s.y_std, dtype=np.float64),
    )


def flat_deterministic_params(layers) -> np.ndarray:
    """Flatten (W, b) layer pairs in canonical order: per layer, W row-major
    then b.  This is also the per-realization draw order on the Bayesian side."""
    parts = []
    for layer in layers:
        parts.append(np.ascontiguousarray(layer.W, dtype=np.float64).ravel())
        parts.append(np.ascontiguousarray(layer.b, dtype=np.float64))
    return np.concatenate(parts)


class _PackedNet:
    """Kernel-ready views of one artifact; rebuilt when the artifact changes."""

    def __init__(self, artifact: ModelArtifact):
        diags = validate(artifact)
        if diags:
            raise ModelValidationError(diags)
        self.widths, self.act_ids = pack_widths(artifact.spec)
        (self.has_std, self.x_mean, self.x_std,
         self.y_mean, self.y_std) = pack_standardizer(artifact)
        self.n_in = int(self.widths[0])
        self.n_out = int(self.widths[-1])
        self.max_width = int(self.widths.max())


class DnnRegressor(BaseEstimator, RegressorMixin):
    """Predict with a deterministic network loaded from a container file.

    The estimator is immutable after construction; predict allocates its
    scratch per call, so concurrent calls from many threads are safe.

    Parameters
    ----------
    artifact : ModelArtifact
        A parsed container of kind ``deterministic``.
    """

    def __init__(self, artifact: ModelArtifact):
        self.artifact = artifact
        self._packed_for = None

    @classmethod
    def from_file(cls, path) -> "DnnRegressor":
        return cls(load_model(path))

    def _packed(self) -> _PackedNet:
        if self._packed_for is not self.artifact:
            require_kind(self.artifact, "deterministic")
            net = _PackedNet(self.artifact)
            net.params = flat_deterministic_params(self.artifact.layers)
            self._net = net
            self._packed_for = self.artifact
        return self._net

    def fit(self, X=None, y=None) -> "DnnRegressor":
        """No-op: weights are fixed by the artifact.  Present so the
        estimator drops into pipelines and model-selection tooling."""
        self._packed()
        return self

    def predict_one(self, x) -> np.ndarray:
        """Predict a single input vector; returns shape (n_out,)."""
        net = self._packed()
        x = as_float_vector(x, length=net.n_in, name="x")
        require_finite(x, "x")
        a = np.empty(net.max_width, dtype=np.float64)
        b = np.empty(net.max_width, dtype=np.float64)
        y = np.empty(net.n_out, dtype=np.float64)
        _kernels.forward(net.params, net.widths, net.act_ids, net.has_std,
                         net.x_mean, net.x_std, net.y_mean, net.y_std,
                         x, a, b, y)
        return y

    def predict(self, X) -> np.ndarray:
        """Predict a batch; row i of the result equals predict_one(X[i]).
        Returns shape (n, n_out)."""
        net = self._packed()
        X = as_float_matrix(X, width=net.n_in, name="X")
        require_finite(X, "X")
        n = X.shape[0]
        Y = np.empty((n, net.n_out), dtype=np.float64)
        if n:
            a = np.empty(net.max_width, dtype=np.float64)
            b = np.empty(net.max_width, dtype=np.float64)
            _kernels.forward_batch(net.params, net.widths, net.act_ids, net.has_std,
                                   net.x_mean, net.x_std, net.y_mean, net.y_std,
                                   X, a, b, Y)
        return Y
