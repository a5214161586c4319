"""Elementary network math: affine transform and standardization.

``affine`` is the reference implementation of the layer transform with the
pinned accumulation order (bias first, then input index ascending, all in
float64).  The engines run a jitted copy of the same loop; this one exists
as the public, dependency-light form and as the oracle the kernel tests
compare against.
"""

from __future__ import annotations

import numpy as np

from .activations import activate
from .validation import as_float_matrix, as_float_vector

__all__ = ["affine", "standardize", "unstandardize", "activate"]


def affine(x, W, b) -> np.ndarray:
    """out[j] = b[j] + sum_i x[i]*W[i, j], i ascending.

    The summation order is fixed for cross-platform bit reproducibility;
    do not replace the loop with a dot product.
    """
    x = as_float_vector(x, name="x")
    W = as_float_matrix(W, name="W")
    b = as_float_vector(b, name="b")
    n_in, n_out = W.shape
    if x.shape[0] != n_in:
        raise ValueError(f"x has length {x.shape[0]}, W expects {n_in}")
    if b.shape[0] != n_out:
        raise ValueError(f"b has length {b.shape[0]}, W produces {n_out}")
    out = np.empty(n_out, dtype=np.float64)
    for j in range(n_out):
        acc = b[j]
        for i in range(n_in):
            acc += x[i] * W[i, j]
        out[j] = acc
    return out


def standardize(x, mean, std) -> np.ndarray:
    """out[i] = (x[i] - mean[i]) / std[i]; std must be elementwise > 0."""
    x = as_float_vector(x, name="x")
    mean = as_float_vector(mean, length=x.shape[0], name="mean")
    std = as_float_vector(std, length=x.shape[0], name="std")
    if not np.all(std > 0):
        raise ValueError("std must be elementwise > 0")
    return (x - mean) / std


def unstandardize(y, mean, std) -> np.ndarray:
    """out[i] = y[i]*std[i] + mean[i]; inverse of standardize."""
    y = as_float_vector(y, name="y")
    mean = as_float_vector(mean, length=y.shape[0], name="mean")
    std = as_float_vector(std, length=y.shape[0], name="std")
    return y * std + mean
