"""Portable model container.

One file carries everything a prediction needs: architecture, weights (or
posterior mean/sigma pairs), and optional standardization vectors.

Wire layout, all little-endian, no padding:

====================  =========================================================
bytes 0-3             magic ``4E 4E 50 46`` (``NNPF``)
bytes 4-5             format version, u16, currently 1
bytes 6-9             manifest length M, u32
bytes 10..10+M        manifest, UTF-8 JSON: {"kind", "widths", "activations",
                      "standardizer"}
remainder             tensor payload, float64, row-major, canonical order
====================  =========================================================

Canonical payload order, per layer l = 1..L: deterministic ``W_l, b_l``;
bayesian ``W_mu, W_sigma, b_mu, b_sigma``.  If the standardizer flag is set,
``x_mean, x_std, y_mean, y_std`` follow the layers.
"""

from __future__ import annotations

import dataclasses
import json
import struct
from pathlib import Path

import numpy as np

from .activations import ACTIVATION_ORDER
from .errors import (
    ManifestError,
    ModelKindError,
    ModelValidationError,
    NotNnpfError,
    ShapeMismatchError,
    TruncatedPayloadError,
    UnsupportedVersionError,
)

MAGIC = b"NNPF"
FORMAT_VERSION = 1
KINDS = ("deterministic", "bayesian")

_HEADER = struct.Struct("<4sHI")


def _as_f64(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    return arr


@dataclasses.dataclass(frozen=True)
class ModelSpec:
    """Architecture summary: what the manifest says, nothing more."""

    kind: str
    layer_widths: tuple
    activations: tuple
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        object.__setattr__(self, "layer_widths", tuple(int(w) for w in self.layer_widths))
        object.__setattr__(self, "activations", tuple(str(a) for a in self.activations))

    @property
    def n_layers(self) -> int:
        return len(self.activations)

    @property
    def input_width(self) -> int:
        return self.layer_widths[0]

    @property
    def output_width(self) -> int:
        return self.layer_widths[-1]


@dataclasses.dataclass(eq=False)
class DeterministicLayer:
    W: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.W = _as_f64(self.W, "W")
        self.b = _as_f64(self.b, "b")

    def __eq__(self, other):
        return (
            isinstance(other, DeterministicLayer)
            and np.array_equal(self.W, other.W)
            and np.array_equal(self.b, other.b)
        )


@dataclasses.dataclass(eq=False)
class BayesianLayer:
    W_mu: np.ndarray
    W_sigma: np.ndarray
    b_mu: np.ndarray
    b_sigma: np.ndarray

    def __post_init__(self):
        self.W_mu = _as_f64(self.W_mu, "W_mu")
        self.W_sigma = _as_f64(self.W_sigma, "W_sigma")
        self.b_mu = _as_f64(self.b_mu, "b_mu")
        self.b_sigma = _as_f64(self.b_sigma, "b_sigma")

    def __eq__(self, other):
        return isinstance(other, BayesianLayer) and all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("W_mu", "W_sigma", "b_mu", "b_sigma")
        )


@dataclasses.dataclass(eq=False)
class Standardizer:
    """Feature/target scaling vectors captured at training time."""

    x_mean: np.ndarray
    x_std: np.ndarray
    y_mean: np.ndarray
    y_std: np.ndarray

    def __post_init__(self):
        for f in ("x_mean", "x_std", "y_mean", "y_std"):
            setattr(self, f, _as_f64(getattr(self, f), f))

    def __eq__(self, other):
        return isinstance(other, Standardizer) and all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("x_mean", "x_std", "y_mean", "y_std")
        )


@dataclasses.dataclass(eq=False)
class ModelArtifact:
    """A parsed container: spec + per-layer tensors + optional standardizer.

    standardizer is None when the container carries no scaling section.
    Treat instances as immutable once built.
    """

    spec: ModelSpec
    layers: list
    standardizer: Standardizer | None = None

    def __eq__(self, other):
        return (
            isinstance(other, ModelArtifact)
            and self.spec == other.spec
            and self.layers == other.layers
            and self.standardizer == other.standardizer
        )


def n_parameters(spec: ModelSpec) -> int:
    """Float count of the tensor payload implied by the manifest."""
    count = 0
    for m, n in zip(spec.layer_widths, spec.layer_widths[1:]):
        count += m * n + n
    if spec.kind == "bayesian":
        count *= 2
    return count


def payload_float_count(spec: ModelSpec, standardizer: bool) -> int:
    count = n_parameters(spec)
    if standardizer:
        count += 2 * (spec.input_width + spec.output_width)
    return count


def canonical_tensors(artifact: ModelArtifact) -> list:
    """Payload tensors in wire order (the single definition of that order)."""
    out = []
    for layer in artifact.layers:
        if isinstance(layer, DeterministicLayer):
            out.extend([layer.W, layer.b])
        else:
            out.extend([layer.W_mu, layer.W_sigma, layer.b_mu, layer.b_sigma])
    if artifact.standardizer is not None:
        s = artifact.standardizer
        out.extend([s.x_mean, s.x_std, s.y_mean, s.y_std])
    return out


def validate(artifact: ModelArtifact) -> list:
    """Collect invariant violations as human-readable diagnostics.

    Returns an empty list iff the artifact is well-formed.  Never raises;
    callers that need a hard failure wrap the result themselves.
    """
    diags = []
    spec = artifact.spec
    if spec.kind not in KINDS:
        diags.append(f"spec: unknown kind {spec.kind!r}")
        return diags
    widths = spec.layer_widths
    if len(widths) < 2:
        diags.append(f"spec: need at least 2 layer widths, got {len(widths)}")
    if any(w < 1 for w in widths):
        diags.append(f"spec: layer widths must be >= 1, got {list(widths)}")
    if len(spec.activations) != len(widths) - 1:
        diags.append(
            f"spec: {len(widths) - 1} layers need {len(widths) - 1} activations, "
            f"got {len(spec.activations)}"
        )
    for act in spec.activations:
        if act not in ACTIVATION_ORDER:
            diags.append(f"spec: unknown activation {act!r}")
    if diags:
        return diags

    if len(artifact.layers) != spec.n_layers:
        diags.append(
            f"layers: expected {spec.n_layers} layers, got {len(artifact.layers)}"
        )
        return diags

    want_cls = DeterministicLayer if spec.kind == "deterministic" else BayesianLayer
    for idx, layer in enumerate(artifact.layers):
        m, n = spec.layer_widths[idx], spec.layer_widths[idx + 1]
        if not isinstance(layer, want_cls):
            diags.append(f"layer {idx}: expected {want_cls.__name__} for kind {spec.kind!r}")
            continue
        if spec.kind == "deterministic":
            pairs = (("W", layer.W, (m, n)), ("b", layer.b, (n,)))
        else:
            pairs = (
                ("W_mu", layer.W_mu, (m, n)),
                ("W_sigma", layer.W_sigma, (m, n)),
                ("b_mu", layer.b_mu, (n,)),
                ("b_sigma", layer.b_sigma, (n,)),
            )
        for fname, arr, want in pairs:
            if arr.shape != want:
                diags.append(f"layer {idx}: {fname} shape {arr.shape} != expected {want}")
        if spec.kind == "bayesian":
            if layer.W_sigma.shape == (m, n) and np.any(layer.W_sigma < 0):
                diags.append(f"layer {idx}: W_sigma has negative entries (min {layer.W_sigma.min()!r})")
            if layer.b_sigma.shape == (n,) and np.any(layer.b_sigma < 0):
                diags.append(f"layer {idx}: b_sigma has negative entries (min {layer.b_sigma.min()!r})")

    s = artifact.standardizer
    if s is not None:
        n_in, n_out = spec.input_width, spec.output_width
        for fname, arr, want in (
            ("x_mean", s.x_mean, n_in),
            ("x_std", s.x_std, n_in),
            ("y_mean", s.y_mean, n_out),
            ("y_std", s.y_std, n_out),
        ):
            if arr.shape != (want,):
                diags.append(f"standardizer: {fname} shape {arr.shape} != expected ({want},)")
        if s.x_std.shape == (n_in,) and not np.all(s.x_std > 0):
            diags.append("standardizer: x_std must be elementwise > 0")
        if s.y_std.shape == (n_out,) and not np.all(s.y_std > 0):
            diags.append("standardizer: y_std must be elementwise > 0")
    return diags


def serialize_model(artifact: ModelArtifact) -> bytes:
    """Encode a valid artifact to the wire format.

    Deterministic: equal artifacts encode to identical bytes.
    """
    diags = validate(artifact)
    if diags:
        shapeish = any("shape" in d or "layers" in d or "spec:" in d for d in diags)
        err_cls = ShapeMismatchError if shapeish else ModelValidationError
        raise err_cls(diags)
    manifest = {
        "kind": artifact.spec.kind,
        "widths": list(artifact.spec.layer_widths),
        "activations": list(artifact.spec.activations),
        "standardizer": artifact.standardizer is not None,
    }
    manifest_bytes = json.dumps(manifest, separators=(",", ":")).encode("utf-8")
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, len(manifest_bytes))
    chunks = [header, manifest_bytes]
    for tensor in canonical_tensors(artifact):
        chunks.append(np.ascontiguousarray(tensor, dtype="<f8").tobytes())
    return b"".join(chunks)


def _manifest_schema(raw: dict) -> tuple:
    """Check manifest JSON against the fixed schema; returns (spec, std flag)."""
    if not isinstance(raw, dict):
        raise ManifestError(f"manifest must be a JSON object, got {type(raw).__name__}")
    extra = set(raw) - {"kind", "widths", "activations", "standardizer"}
    if extra:
        raise ManifestError(f"manifest has unknown keys: {sorted(extra)}")
    missing = {"kind", "widths", "activations", "standardizer"} - set(raw)
    if missing:
        raise ManifestError(f"manifest missing keys: {sorted(missing)}")
    kind = raw["kind"]
    if kind not in KINDS:
        raise ManifestError(f"manifest kind must be one of {KINDS}, got {kind!r}")
    widths = raw["widths"]
    if (
        not isinstance(widths, list)
        or len(widths) < 2
        or not all(isinstance(w, int) and not isinstance(w, bool) and w >= 1 for w in widths)
    ):
        raise ManifestError("manifest widths must be a list of >= 2 integers, each >= 1")
    acts = raw["activations"]
    if not isinstance(acts, list) or not all(isinstance(a, str) for a in acts):
        raise ManifestError("manifest activations must be a list of strings")
    if len(acts) != len(widths) - 1:
        raise ManifestError(
            f"manifest declares {len(widths) - 1} layers but {len(acts)} activations"
        )
    for a in acts:
        if a not in ACTIVATION_ORDER:
            raise ManifestError(f"manifest names unknown activation {a!r}")
    std = raw["standardizer"]
    if not isinstance(std, bool):
        raise ManifestError("manifest standardizer flag must be a JSON boolean")
    return ModelSpec(kind=kind, layer_widths=widths, activations=acts), std


def parse_model(data: bytes) -> ModelArtifact:
    """Decode wire bytes into a validated artifact.

    Accepts arbitrary bytes; every malformation maps to a typed error
    (NotNnpfError, UnsupportedVersionError, ManifestError,
    TruncatedPayloadError, ModelValidationError).
    """
    data = bytes(data)
    if len(data) < _HEADER.size:
        raise TruncatedPayloadError(_HEADER.size, len(data), segment="header")
    magic, version, manifest_len = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise NotNnpfError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(version)
    manifest_end = _HEADER.size + manifest_len
    if manifest_end > len(data):
        raise TruncatedPayloadError(manifest_end, len(data), segment="manifest")
    try:
        raw = json.loads(data[_HEADER.size:manifest_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ManifestError(f"manifest is not valid UTF-8 JSON: {exc}") from None
    spec, has_std = _manifest_schema(raw)

    n_floats = payload_float_count(spec, has_std)
    expected = manifest_end + 8 * n_floats
    if len(data) != expected:
        raise TruncatedPayloadError(expected, len(data), segment="tensor payload")
    flat = np.frombuffer(data, dtype="<f8", count=n_floats, offset=manifest_end)

    layers = []
    pos = 0

    def take(shape) -> np.ndarray:
        nonlocal pos
        size = int(np.prod(shape))
        arr = flat[pos:pos + size].reshape(shape)
        pos += size
        return arr

    for m, n in zip(spec.layer_widths, spec.layer_widths[1:]):
        if spec.kind == "deterministic":
            layers.append(DeterministicLayer(W=take((m, n)), b=take((n,))))
        else:
            layers.append(
                BayesianLayer(
                    W_mu=take((m, n)), W_sigma=take((m, n)),
                    b_mu=take((n,)), b_sigma=take((n,)),
                )
            )
    standardizer = None
    if has_std:
        n_in, n_out = spec.input_width, spec.output_width
        standardizer = Standardizer(
            x_mean=take((n_in,)), x_std=take((n_in,)),
            y_mean=take((n_out,)), y_std=take((n_out,)),
        )
    artifact = ModelArtifact(spec=spec, layers=layers, standardizer=standardizer)
    diags = validate(artifact)
    if diags:
        raise ModelValidationError(diags)
    return artifact


def load_model(path) -> ModelArtifact:
    return parse_model(Path(path).read_bytes())


def save_model(artifact: ModelArtifact, path) -> None:
    Path(path).write_bytes(serialize_model(artifact))


def require_kind(artifact: ModelArtifact, kind: str) -> None:
    if artifact.spec.kind != kind:
        raise ModelKindError(f"expected a {kind} model, got {artifact.spec.kind}")
