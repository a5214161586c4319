"""Standalone NNPF container writer/reader.

Implements the wire format directly so this package never imports the
inference library: magic "NNPF", u16 LE version 1, u32 LE manifest length,
compact JSON manifest with keys kind/widths/activations/standardizer in
that order, then all tensors as float64 little-endian in row-major order.

Canonical tensor order per layer: W, b for deterministic models and
W_mu, W_sigma, b_mu, b_sigma for bayesian ones, followed by
x_mean, x_std, y_mean, y_std when a standardizer is present.
"""

import json
import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"NNPF"
VERSION = 1
_HEADER = struct.Struct("<4sHI")

ACTIVATIONS = ("relu", "elu", "selu", "softplus", "tanh", "linear")


@dataclass
class Container:
    kind: str
    widths: list
    activations: list
    tensors: list  # flat list in canonical order, float64 arrays
    standardizer: list | None  # [x_mean, x_std, y_mean, y_std] or None


def _manifest_bytes(kind, widths, activations, has_standardizer):
    manifest = {
        "kind": kind,
        "widths": [int(w) for w in widths],
        "activations": list(activations),
        "standardizer": bool(has_standardizer),
    }
    return json.dumps(manifest, separators=(",", ":")).encode("utf-8")


def _expected_shapes(kind, widths):
    shapes = []
    for m, n in zip(widths, widths[1:]):
        if kind == "deterministic":
            shapes += [(m, n), (n,)]
        else:
            shapes += [(m, n), (m, n), (n,), (n,)]
    return shapes


def write(container: Container) -> bytes:
    kind, widths = container.kind, container.widths
    if kind not in ("deterministic", "bayesian"):
        raise ValueError(f"unknown model kind {kind!r}")
    if len(container.activations) != len(widths) - 1:
        raise ValueError("one activation per layer is required")
    for act in container.activations:
        if act not in ACTIVATIONS:
            raise ValueError(f"unsupported activation {act!r}")

    shapes = _expected_shapes(kind, widths)
    if container.standardizer is not None:
        k, n_out = widths[0], widths[-1]
        shapes += [(k,), (k,), (n_out,), (n_out,)]
    tensors = list(container.tensors)
    if container.standardizer is not None:
        tensors += list(container.standardizer)
    if len(tensors) != len(shapes):
        raise ValueError(f"expected {len(shapes)} tensors, got {len(tensors)}")

    parts = []
    for arr, shape in zip(tensors, shapes):
        arr = np.ascontiguousarray(arr, dtype="<f8")
        if arr.shape != shape:
            raise ValueError(f"tensor shape {arr.shape} does not match {shape}")
        parts.append(arr.tobytes())

    manifest = _manifest_bytes(kind, widths, container.activations,
                               container.standardizer is not None)
    return _HEADER.pack(MAGIC, VERSION, len(manifest)) + manifest + b"".join(parts)


def read(blob: bytes) -> Container:
    magic, version, mlen = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ValueError("not an NNPF container")
    if version != VERSION:
        raise ValueError(f"unsupported container version {version}")
    manifest = json.loads(blob[_HEADER.size:_HEADER.size + mlen])
    kind, widths = manifest["kind"], manifest["widths"]

    shapes = _expected_shapes(kind, widths)
    if manifest["standardizer"]:
        k, n_out = widths[0], widths[-1]
        shapes += [(k,), (k,), (n_out,), (n_out,)]
    flat = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size + mlen)
    if flat.size != sum(int(np.prod(s)) for s in shapes):
        raise ValueError("payload length does not match the manifest")

    tensors, pos = [], 0
    for shape in shapes:
        count = int(np.prod(shape))
        tensors.append(flat[pos:pos + count].reshape(shape).copy())
        pos += count
    standardizer = None
    if manifest["standardizer"]:
        tensors, standardizer = tensors[:-4], tensors[-4:]
    return Container(kind=kind, widths=list(widths),
                     activations=list(manifest["activations"]),
                     tensors=tensors, standardizer=standardizer)
