"""Synthetic regression datasets for exercising the engines end to end.

Two cases:

``sinusoid``
    y = 450 + 150*sin(x1)*cos(x2) + 26.3*sin(x1 + x2) + eps,
    x1, x2 ~ U(0, 2*pi), eps ~ N(0, noise_std^2).  The noiseless surface
    spans exactly [273.7, 626.3].

``nonlinear3``
    y = 100 + 40*x1*exp(-x2^2) + 30*sin(x3)*x1, x1..x3 ~ U(-2, 2),
    same additive noise.

Generation is deterministic given the seed, with a pinned single-stream
draw order: the feature uniforms row by row, then one gaussian per row
for the noise, then (when splitting) the Fisher-Yates permutation that
drives the train/test split.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .rng import Rng

TWO_PI = 2.0 * math.pi


def sinusoid_surface(x1, x2):
    """Noiseless sinusoid target."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    return 450.0 + 150.0 * np.sin(x1) * np.cos(x2) + 26.3 * np.sin(x1 + x2)


def nonlinear3_surface(x1, x2, x3):
    """Noiseless three-input target."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    x3 = np.asarray(x3, dtype=np.float64)
    return 100.0 + 40.0 * x1 * np.exp(-x2 * x2) + 30.0 * np.sin(x3) * x1


_CASES = {
    "sinusoid": {
        "features": ("x1", "x2"),
        "ranges": ((0.0, TWO_PI), (0.0, TWO_PI)),
        "surface": sinusoid_surface,
    },
    "nonlinear3": {
        "features": ("x1", "x2", "x3"),
        "ranges": ((-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)),
        "surface": nonlinear3_surface,
    },
}

CASE_NAMES = tuple(_CASES)


@dataclasses.dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple
    target_name: str

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    def take(self, idx) -> "Dataset":
        return Dataset(X=self.X[idx], y=self.y[idx],
                       feature_names=self.feature_names, target_name=self.target_name)


def _draw(case: str, n: int, noise_std: float, rng: Rng) -> Dataset:
    try:
        cfg = _CASES[case]
    except KeyError:
        raise ValueError(f"unknown case {case!r}, expected one of {CASE_NAMES}") from None
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if noise_std < 0:
        raise ValueError(f"noise_std must be >= 0, got {noise_std}")
    k = len(cfg["features"])
    u = rng.doubles(n * k).reshape(n, k)
    X = np.empty((n, k), dtype=np.float64)
    for j, (lo, hi) in enumerate(cfg["ranges"]):
        X[:, j] = lo + u[:, j] * (hi - lo)
    eps = rng.gaussians(n)
    y = cfg["surface"](*(X[:, j] for j in range(k))) + noise_std * eps
    return Dataset(X=X, y=y, feature_names=cfg["features"], target_name="y")


def generate(case: str, n: int, seed: int = 42, noise_std: float = 5.0) -> Dataset:
    """Draw a dataset; identical arguments give identical data."""
    return _draw(case, n, noise_std, Rng(seed))


def generate_split(case: str, n: int, seed: int = 42, noise_std: float = 5.0,
                   train_fraction: float = 0.8) -> tuple:
    """Draw a dataset plus its shuffled train/test split.

    Returns (full, train, test).  full is identical to generate() with the
    same arguments; the split permutation continues the same stream, so
    the whole triple is pinned by the seed.
    """
    rng = Rng(seed)
    full = _draw(case, n, noise_std, rng)
    perm = rng.shuffle_indices(full.n_rows)
    n_train = int(round(full.n_rows * train_fraction))
    return full, full.take(perm[:n_train]), full.take(perm[n_train:])
