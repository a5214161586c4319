"""Shared test helpers: independent reference implementations and builders.

The reference RNG and reference forward pass are deliberate
reimplementations (pure Python, math-module scalars) so the jitted
production code is checked against something that shares no code with it.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from nnpf.format import (
    BayesianLayer,
    DeterministicLayer,
    ModelArtifact,
    ModelSpec,
    Standardizer,
)

FIXTURE_DIR = Path(__file__).parent / "fixtures"

_MASK = (1 << 64) - 1


class RefRng:
    """Pure-Python xoshiro256** + splitmix64 + polar Box-Muller oracle."""

    def __init__(self, seed: int):
        self.s = []
        z = seed & _MASK
        for _ in range(4):
            z = (z + 0x9E3779B97F4A7C15) & _MASK
            w = z
            w = ((w ^ (w >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            w = ((w ^ (w >> 27)) * 0x94D049BB133111EB) & _MASK
            self.s.append((w ^ (w >> 31)) & _MASK)
        self.spare = None

    def next_u64(self) -> int:
        s = self.s
        x = (s[1] * 5) & _MASK
        result = ((((x << 7) | (x >> 57)) & _MASK) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = ((s[3] << 45) | (s[3] >> 19)) & _MASK
        return result

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def next_gaussian(self) -> float:
        if self.spare is not None:
            v, self.spare = self.spare, None
            return v
        while True:
            u = 2.0 * self.next_double() - 1.0
            v = 2.0 * self.next_double() - 1.0
            q = u * u + v * v
            if 0.0 < q < 1.0:
                break
        m = math.sqrt(-2.0 * math.log(q) / q)
        self.spare = v * m
        return u * m


def ref_act(kind: str, z: float) -> float:
    """Scalar activations via libm, mirroring the pinned formulas."""
    if kind == "relu":
        return z if z > 0.0 else 0.0
    if kind == "elu":
        return z if z > 0.0 else 1.0 * math.expm1(z)
    if kind == "selu":
        lam, alpha = 1.0507009873554805, 1.6732632423543772
        return lam * z if z > 0.0 else lam * (alpha * math.expm1(z))
    if kind == "softplus":
        if z > 0.0:
            return z + math.log1p(math.exp(-z))
        return math.log1p(math.exp(z))
    if kind == "tanh":
        return math.tanh(z)
    if kind == "linear":
        return z
    raise ValueError(kind)


def ref_forward(artifact: ModelArtifact, x) -> list:
    """Reference prediction: standardize, layers with ascending-index
    accumulation, unstandardize.  Pure Python floats throughout."""
    spec = artifact.spec
    s = artifact.standardizer
    h = [float(v) for v in x]
    if s is not None:
        h = [(h[i] - s.x_mean[i]) / s.x_std[i] for i in range(len(h))]
    for layer, kind in zip(artifact.layers, spec.activations):
        W, b = layer.W, layer.b
        out = []
        for j in range(W.shape[1]):
            acc = float(b[j])
            for i in range(W.shape[0]):
                acc += h[i] * float(W[i, j])
            out.append(ref_act(kind, acc))
        h = out
    if s is not None:
        h = [h[j] * s.y_std[j] + s.y_mean[j] for j in range(len(h))]
    return h


def random_spec(rng: np.random.Generator, kind: str, max_layers: int = 4,
                max_width: int = 6) -> ModelSpec:
    from nnpf.activations import ACTIVATION_ORDER

    n_layers = int(rng.integers(1, max_layers + 1))
    widths = [int(w) for w in rng.integers(1, max_width + 1, size=n_layers + 1)]
    acts = [str(rng.choice(ACTIVATION_ORDER)) for _ in range(n_layers)]
    return ModelSpec(kind=kind, layer_widths=widths, activations=acts)


def random_artifact(seed: int, kind: str = "deterministic",
                    with_standardizer: bool | None = None) -> ModelArtifact:
    """A structurally valid artifact with bounded random tensors."""
    rng = np.random.default_rng(seed)
    spec = random_spec(rng, kind)
    if with_standardizer is None:
        with_standardizer = bool(rng.integers(0, 2))
    layers = []
    for m, n in zip(spec.layer_widths, spec.layer_widths[1:]):
        if kind == "deterministic":
            layers.append(DeterministicLayer(W=rng.normal(size=(m, n)),
                                             b=rng.normal(size=n)))
        else:
            layers.append(BayesianLayer(
                W_mu=rng.normal(size=(m, n)),
                W_sigma=np.abs(rng.normal(size=(m, n))) * 0.1,
                b_mu=rng.normal(size=n),
                b_sigma=np.abs(rng.normal(size=n)) * 0.1,
            ))
    standardizer = None
    if with_standardizer:
        n_in, n_out = spec.input_width, spec.output_width
        standardizer = Standardizer(
            x_mean=rng.normal(size=n_in),
            x_std=np.abs(rng.normal(size=n_in)) + 0.5,
            y_mean=rng.normal(size=n_out),
            y_std=np.abs(rng.normal(size=n_out)) + 0.5,
        )
    return ModelArtifact(spec=spec, layers=layers, standardizer=standardizer)


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    if not FIXTURE_DIR.is_dir():
        pytest.fail(
            f"fixture directory {FIXTURE_DIR} is missing; regenerate it with "
            f"the exporter package (see exporter/README.md)"
        )
    return FIXTURE_DIR
