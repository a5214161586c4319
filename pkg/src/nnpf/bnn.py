"""Monte Carlo predictive inference for Bayesian (mean-field Gaussian) networks.

Every weight is an independent normal with stored mean and sigma.  A
prediction draws many full weight realizations, runs each through the same
forward kernel the deterministic engine uses, and aggregates the outputs
into mean / std / central 95% interval.

Draw order is canonical and fixed: realizations consume one gaussian per
parameter in flat layer order (per layer: W row-major, then b), rows in
sequence from a single stream.  With a given seed the entire sample matrix
is reproducible bit-for-bit across runs and platforms.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from . import _kernels
from .dnn import _PackedNet, pack_standardizer, pack_widths
from .errors import ModelValidationError
from .format import DeterministicLayer, ModelArtifact, load_model, require_kind, validate
from .rng import Rng
from .validation import as_float_matrix, as_float_vector, require_finite


@dataclasses.dataclass
class PredictiveResult:
    """Sample statistics of a predictive distribution, per output column."""

    mean: np.ndarray
    std: np.ndarray
    interval_lo: np.ndarray
    interval_hi: np.ndarray
    n_samples: int


def predictive_stats(samples) -> PredictiveResult:
    """Aggregate a (n_samples, n_out) sample matrix.

    mean is the column mean, std the sample standard deviation (divisor
    n-1), and the interval the empirical 2.5th/97.5th percentiles with
    linear interpolation between order statistics.  Requires n >= 2.
    """
    samples = as_float_matrix(samples, name="samples")
    n = samples.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 samples to aggregate, got {n}")
    lo, hi = np.percentile(samples, [2.5, 97.5], axis=0, method="linear")
    return PredictiveResult(
        mean=samples.mean(axis=0),
        std=samples.std(axis=0, ddof=1),
        interval_lo=lo,
        interval_hi=hi,
        n_samples=n,
    )


def _flat_mu_sigma(layers) -> tuple:
    mus, sigmas = [], []
    for layer in layers:
        mus.append(np.ascontiguousarray(layer.W_mu, dtype=np.float64).ravel())
        mus.append(np.ascontiguousarray(layer.b_mu, dtype=np.float64))
        sigmas.append(np.ascontiguousarray(layer.W_sigma, dtype=np.float64).ravel())
        sigmas.append(np.ascontiguousarray(layer.b_sigma, dtype=np.float64))
    return np.concatenate(mus), np.concatenate(sigmas)


class BnnRegressor(BaseEstimator, RegressorMixin):
    """Predict with a Bayesian network loaded from a container file.

    Parameters
    ----------
    artifact : ModelArtifact
        A parsed container of kind ``bayesian``.
    n_samples : int, default=20000
        Monte Carlo realizations per prediction.  100 is a documented fast
        mode that is already well converged for smooth regression surfaces.
    random_state : int, default=0
        Seed for the per-call stream: predict and predict_dist reseed on
        every call, so repeated calls return identical results.
    """

    def __init__(self, artifact: ModelArtifact, n_samples: int = 20000, random_state: int = 0):
        self.artifact = artifact
        self.n_samples = n_samples
        self.random_state = random_state
        self._packed_for = None

    @classmethod
    def from_file(cls, path, n_samples: int = 20000, random_state: int = 0) -> "BnnRegressor":
        return cls(load_model(path), n_samples=n_samples, random_state=random_state)

    def _packed(self) -> _PackedNet:
        if self._packed_for is not self.artifact:
            require_kind(self.artifact, "bayesian")
            net = _PackedNet(self.artifact)
            net.mu, net.sigma = _flat_mu_sigma(self.artifact.layers)
            self._net = net
            self._packed_for = self.artifact
        return self._net

    def fit(self, X=None, y=None) -> "BnnRegressor":
        """No-op: the posterior comes from the artifact."""
        self._packed()
        return self

    def sample_realization(self, rng: Rng) -> list:
        """Draw one deterministic layer set: W = W_mu + W_sigma*eps, b likewise.

        Consumes exactly one gaussian per parameter, in canonical order.
        sigma = 0 entries come back equal to their mean.
        """
        net = self._packed()
        eps = rng.gaussians(net.mu.shape[0])
        flat = net.mu + net.sigma * eps
        layers = []
        pos = 0
        for m, n in zip(self.artifact.spec.layer_widths, self.artifact.spec.layer_widths[1:]):
            W = flat[pos:pos + m * n].reshape(m, n)
            pos += m * n
            b = flat[pos:pos + n]
            pos += n
            layers.append(DeterministicLayer(W=W, b=b))
        return layers

    def predict_samples(self, x, n_samples: int | None = None, rng: Rng | None = None) -> np.ndarray:
        """Monte Carlo sample matrix for one input, shape (n_samples, n_out).

        Each row is a full forward pass through a fresh weight realization.
        When rng is supplied its stream continues across calls; when omitted
        a fresh stream seeded with random_state is used.
        """
        net = self._packed()
        n = self.n_samples if n_samples is None else int(n_samples)
        if n < 1:
            raise ValueError(f"n_samples must be >= 1, got {n}")
        if rng is None:
            rng = Rng(self.random_state)
        x = as_float_vector(x, length=net.n_in, name="x")
        require_finite(x, "x")
        out = np.empty((n, net.n_out), dtype=np.float64)
        pbuf = np.empty(net.mu.shape[0], dtype=np.float64)
        a = np.empty(net.max_width, dtype=np.float64)
        b = np.empty(net.max_width, dtype=np.float64)
        _kernels.sample_rows(net.mu, net.sigma, net.widths, net.act_ids, net.has_std,
                             net.x_mean, net.x_std, net.y_mean, net.y_std,
                             x, rng._state, rng._cache, pbuf, a, b, out)
        return out

    def predict_dist(self, X, n_samples: int | None = None) -> PredictiveResult:
        """Predictive mean/std/95% interval for each input row.

        All rows share one stream seeded with random_state, consumed in row
        order.  n_samples = 1 degenerates to the single realization with
        zero std and a collapsed interval.
        """
        net = self._packed()
        X = as_float_matrix(X, width=net.n_in, name="X")
        require_finite(X, "X")
        n = self.n_samples if n_samples is None else int(n_samples)
        if n < 1:
            raise ValueError(f"n_samples must be >= 1, got {n}")
        rng = Rng(self.random_state)
        n_rows = X.shape[0]
        mean = np.empty((n_rows, net.n_out))
        std = np.empty((n_rows, net.n_out))
        lo = np.empty((n_rows, net.n_out))
        hi = np.empty((n_rows, net.n_out))
        for i in range(n_rows):
            samples = self.predict_samples(X[i], n_samples=n, rng=rng)
            if n == 1:
                mean[i] = samples[0]
                std[i] = 0.0
                lo[i] = samples[0]
                hi[i] = samples[0]
            else:
                stats = predictive_stats(samples)
                mean[i] = stats.mean
                std[i] = stats.std
                lo[i] = stats.interval_lo
                hi[i] = stats.interval_hi
        return PredictiveResult(mean=mean, std=std, interval_lo=lo, interval_hi=hi, n_samples=n)

    def predict(self, X) -> np.ndarray:
        """Predictive mean per row, shape (n, n_out)."""
        return self.predict_dist(X).mean
