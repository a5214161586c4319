"""Activation catalog applied elementwise after each affine layer.

The catalog is closed: the container manifest may only name members of
:data:`ACTIVATION_ORDER`.  ``linear`` is the identity, conventionally used
on regression output layers.
"""

from __future__ import annotations

import numpy as np

ELU_ALPHA = 1.0
SELU_ALPHA = 1.6732632423543772
SELU_LAMBDA = 1.0507009873554805

# Order is load-bearing: the jitted kernels dispatch on the index.
ACTIVATION_ORDER = ("relu", "elu", "selu", "softplus", "tanh", "linear")
ACTIVATION_IDS = {name: i for i, name in enumerate(ACTIVATION_ORDER)}


def relu(v: np.ndarray) -> np.ndarray:
    return np.maximum(v, 0.0)


def elu(v: np.ndarray) -> np.ndarray:
    # minimum() keeps expm1 off the positive branch, which would overflow past ~709.
    return np.where(v > 0.0, v, ELU_ALPHA * np.expm1(np.minimum(v, 0.0)))


def selu(v: np.ndarray) -> np.ndarray:
    return SELU_LAMBDA * np.where(v > 0.0, v, SELU_ALPHA * np.expm1(np.minimum(v, 0.0)))


def softplus(v: np.ndarray) -> np.ndarray:
    # Overflow-safe form of log(1 + exp(v)).
    return np.maximum(v, 0.0) + np.log1p(np.exp(-np.abs(v)))


def tanh(v: np.ndarray) -> np.ndarray:
    return np.tanh(v)


def linear(v: np.ndarray) -> np.ndarray:
    return np.asarray(v, dtype=np.float64)


ACTIVATIONS = {
    "relu": relu,
    "elu": elu,
    "selu": selu,
    "softplus": softplus,
    "tanh": tanh,
    "linear": linear,
}


def activate(kind: str, v) -> np.ndarray:
    """Apply the named activation elementwise to a float64 copy of ``v``."""
    try:
        fn = ACTIVATIONS[kind]
    except KeyError:
        raise ValueError(f"unknown activation {kind!r}, expected one of {ACTIVATION_ORDER}") from None
    return fn(np.asarray(v, dtype=np.float64))
