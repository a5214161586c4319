"""Input validation helpers shared by the engines, metrics, and CLI."""

from __future__ import annotations

import numpy as np


def as_float_vector(x, *, length: int | None = None, name: str = "x") -> np.ndarray:
    """Coerce to a contiguous 1-D float64 array, optionally checking its length.

    Accepts anything array-like; a column vector of shape ``(n, 1)`` is
    flattened.  Raises ``ValueError`` on higher dimensions or length mismatch.
    """
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise ValueError(f"{name} has length {arr.shape[0]}, expected {length}")
    return arr


def as_float_matrix(X, *, width: int | None = None, name: str = "X") -> np.ndarray:
    """Coerce to a contiguous 2-D float64 array, optionally checking the row width."""
    arr = np.ascontiguousarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, width or 0)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if width is not None and arr.shape[1] != width:
        raise ValueError(f"{name} has {arr.shape[1]} columns, expected {width}")
    return arr


def require_finite(arr: np.ndarray, name: str = "x") -> np.ndarray:
    """Reject NaN/inf so a host solver fails loudly instead of receiving NaN predictions."""
    if not np.isfinite(arr).all():
        if arr.ndim == 2:
            bad = int(np.nonzero(~np.isfinite(arr).all(axis=1))[0][0])
            raise ValueError(f"{name} contains a non-finite value in row {bad}")
        raise ValueError(f"{name} contains non-finite values")
    return arr


def require_positive(arr: np.ndarray, name: str) -> np.ndarray:
    if not (arr > 0.0).all():
        raise ValueError(f"{name} must be strictly positive elementwise")
    return arr
