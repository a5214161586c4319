"""Standardization metadata sidecar: one HDF5 file with four float64 arrays."""

import h5py
import numpy as np

FIELDS = ("x_mean", "x_std", "y_mean", "y_std")


def save_metadata(path, x_mean, x_std, y_mean, y_std):
    values = dict(zip(FIELDS, (x_mean, x_std, y_mean, y_std)))
    with h5py.File(path, "w") as f:
        for name in FIELDS:
            f.create_dataset(name, data=np.asarray(values[name], dtype=np.float64))


def load_metadata(path):
    with h5py.File(path, "r") as f:
        missing = [name for name in FIELDS if name not in f]
        if missing:
            raise KeyError(f"metadata file {path} is missing {', '.join(missing)}")
        return tuple(np.asarray(f[name], dtype=np.float64) for name in FIELDS)
