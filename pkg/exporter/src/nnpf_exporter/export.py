"""Model export and reference-prediction emission.

Reads trained Keras models (legacy HDF5), detects the dense architecture,
upcasts weights to float64, and writes the NNPF container. Reference
predictions run the framework's own float64 ops (standardize, dense chain,
unstandardize) so the committed oracles share the engine's numeric type;
a float32 variant reproduces the training-time precision for context.
"""

import csv
from dataclasses import dataclass, field

import keras
import numpy as np
import tensorflow as tf

from .container import ACTIVATIONS, Container, write
from .layers import DenseReparam
from .metadata import load_metadata


class UnsupportedLayerError(ValueError):
    pass


@dataclass
class ExportManifest:
    source_model: str
    widths: list
    activations: list
    standardizer: list | None
    out_nnpf: str
    reference_csv: str | None = field(default=None)


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header = rows[0]
    data = np.array([[float(v) for v in row] for row in rows[1:] if row])
    return header, data.reshape(-1, len(header))


def write_csv(path, header, data):
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in data:
            f.write(",".join(repr(float(v)) for v in row) + "\n")


def load_model(path):
    # compile=False: the optimizer/loss state is irrelevant for export and
    # legacy-h5 compile configs do not always deserialize under Keras 3
    return keras.models.load_model(path, compile=False,
                                   custom_objects={"DenseReparam": DenseReparam})


def _activation_name(layer):
    name = keras.activations.serialize(layer.activation)
    if not isinstance(name, str) or name not in ACTIVATIONS:
        raise UnsupportedLayerError(
            f"unsupported activation {name!r} in layer {layer.name!r}")
    return name


def _dense_layers(model, expect):
    layers = [l for l in model.layers
              if not isinstance(l, keras.layers.InputLayer)]
    for layer in layers:
        if not isinstance(layer, expect):
            raise UnsupportedLayerError(
                f"unsupported layer type {type(layer).__name__} ({layer.name!r})")
    if not layers:
        raise UnsupportedLayerError("model has no layers")
    return layers


def _detect(layers):
    widths = [int(layers[0].get_weights()[0].shape[0])]
    activations = []
    for layer in layers:
        widths.append(int(layer.units))
        activations.append(_activation_name(layer))
    return widths, activations


def _standardizer_arrays(metadata_file, widths):
    if metadata_file is None:
        return None
    x_mean, x_std, y_mean, y_std = load_metadata(metadata_file)
    if x_mean.shape != (widths[0],) or y_mean.shape != (widths[-1],):
        raise ValueError("metadata arrays do not match the model architecture")
    return [x_mean, x_std, y_mean, y_std]


def softplus64(rho):
    """The layer's scale transform, applied in float64 to the upcast rho."""
    r = np.asarray(rho, dtype=np.float64)
    return np.maximum(r, 0.0) + np.log1p(np.exp(-np.abs(r)))


def export_dnn(model_file, metadata_file, out_nnpf) -> ExportManifest:
    layers = _dense_layers(load_model(model_file), keras.layers.Dense)
    widths, activations = _detect(layers)
    tensors = []
    for layer in layers:
        W, b = layer.get_weights()
        tensors += [W.astype(np.float64), b.astype(np.float64)]
    standardizer = _standardizer_arrays(metadata_file, widths)
    blob = write(Container(kind="deterministic", widths=widths,
                           activations=activations, tensors=tensors,
                           standardizer=standardizer))
    with open(out_nnpf, "wb") as f:
        f.write(blob)
    return ExportManifest(str(model_file), widths, activations, standardizer,
                          str(out_nnpf))


def export_bnn(model_file, metadata_file, out_nnpf) -> ExportManifest:
    layers = _dense_layers(load_model(model_file), DenseReparam)
    widths, activations = _detect(layers)
    tensors = []
    for layer in layers:
        mu = layer.kernel_mu.numpy().astype(np.float64)
        sigma = softplus64(layer.kernel_rho.numpy())
        b = layer.bias.numpy().astype(np.float64)
        tensors += [mu, sigma, b, np.zeros_like(b)]
    standardizer = _standardizer_arrays(metadata_file, widths)
    blob = write(Container(kind="bayesian", widths=widths,
                           activations=activations, tensors=tensors,
                           standardizer=standardizer))
    with open(out_nnpf, "wb") as f:
        f.write(blob)
    return ExportManifest(str(model_file), widths, activations, standardizer,
                          str(out_nnpf))


_TF_ACTS = {"relu": tf.nn.relu, "elu": tf.nn.elu, "selu": tf.nn.selu,
            "softplus": tf.math.softplus, "tanh": tf.math.tanh,
            "linear": tf.identity}


def _standardize(X, standardizer):
    if standardizer is None:
        return np.asarray(X, dtype=np.float64)
    x_mean, x_std = standardizer[0], standardizer[1]
    return (np.asarray(X, dtype=np.float64) - x_mean) / x_std


def _unstandardize(Y, standardizer):
    if standardizer is None:
        return Y
    return Y * standardizer[3] + standardizer[2]


def dnn_forward_f64(weight_pairs, activations, standardizer, X):
    h = tf.constant(_standardize(X, standardizer), dtype=tf.float64)
    for (W, b), act in zip(weight_pairs, activations):
        h = _TF_ACTS[act](tf.matmul(h, tf.constant(W, tf.float64))
                          + tf.constant(b, tf.float64))
    return _unstandardize(h.numpy(), standardizer)


def dnn_forward_f32(weight_pairs_f32, activations, standardizer, X):
    h = tf.constant(_standardize(X, standardizer), dtype=tf.float32)
    for (W, b), act in zip(weight_pairs_f32, activations):
        h = _TF_ACTS[act](tf.matmul(h, tf.constant(W, tf.float32))
                          + tf.constant(b, tf.float32))
    return _unstandardize(h.numpy().astype(np.float64), standardizer)


def bnn_sample_stats(mu_sigma_layers, activations, standardizer, X,
                     n_samples, seed, chunk=250):
    """Predictive mean/std over weight realizations, computed in float64."""
    x0 = tf.constant(_standardize(X, standardizer), dtype=tf.float64)
    n = x0.shape[0]
    rng = np.random.default_rng(seed)
    total = np.zeros((n,))
    total_sq = np.zeros((n,))
    done = 0
    while done < n_samples:
        c = min(chunk, n_samples - done)
        h = tf.tile(x0[None, :, :], [c, 1, 1])
        for (mu, sigma, b), act in zip(mu_sigma_layers, activations):
            eps = rng.standard_normal((c,) + mu.shape)
            K = tf.constant(mu + sigma * eps, tf.float64)
            h = _TF_ACTS[act](tf.einsum("cni,cio->cno", h, K)
                              + tf.constant(b, tf.float64))
        out = _unstandardize(h.numpy()[:, :, 0], standardizer)
        total += out.sum(axis=0)
        total_sq += (out**2).sum(axis=0)
        done += c
    mean = total / n_samples
    var = (total_sq - n_samples * mean**2) / (n_samples - 1)
    return mean, np.sqrt(np.maximum(var, 0.0))


def emit_reference(model_file, metadata_file, input_csv, out_csv,
                   n_samples=20000, seed=123, float32=False):
    model = load_model(model_file)
    _, X = read_csv(input_csv)
    bayesian = any(isinstance(l, DenseReparam) for l in model.layers)
    layers = _dense_layers(model, DenseReparam if bayesian else keras.layers.Dense)
    widths, activations = _detect(layers)
    if widths[-1] != 1:
        raise ValueError("reference emission supports single-output models")
    standardizer = _standardizer_arrays(metadata_file, widths)

    if bayesian:
        mu_sigma = [(l.kernel_mu.numpy().astype(np.float64),
                     softplus64(l.kernel_rho.numpy()),
                     l.bias.numpy().astype(np.float64)) for l in layers]
        mean, std = bnn_sample_stats(mu_sigma, activations, standardizer, X,
                                     n_samples, seed)
        cols = np.column_stack([mean, std, np.full_like(mean, n_samples)])
        write_csv(out_csv, ["y_mean", "y_std", "n_samples"], cols)
    elif float32:
        pairs = [tuple(l.get_weights()) for l in layers]
        y = dnn_forward_f32(pairs, activations, standardizer, X)
        write_csv(out_csv, ["y_ref"], y.reshape(-1, 1))
    else:
        pairs = [(W.astype(np.float64), b.astype(np.float64))
                 for W, b in (l.get_weights() for l in layers)]
        y = dnn_forward_f64(pairs, activations, standardizer, X)
        write_csv(out_csv, ["y_ref"], np.asarray(y).reshape(-1, 1))
    return str(out_csv)
