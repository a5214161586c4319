"""Shared tiny trained models; slow full-size training stays out of tests."""

import os
import subprocess
from pathlib import Path

import numpy as np
import pytest

os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "3")

REPO_FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures"


def run_nnpf(*args, expect_failure=False):
    """Drive the inference package through its command-line interface."""
    proc = subprocess.run(["nnpf", *map(str, args)],
                          capture_output=True, text=True)
    if expect_failure:
        assert proc.returncode != 0, proc.stdout + proc.stderr
    else:
        assert proc.returncode == 0, proc.stdout + proc.stderr
    return proc.stdout + proc.stderr


@pytest.fixture(scope="session")
def toy_data():
    rng = np.random.default_rng(5)
    X = rng.uniform(0.0, 6.28, size=(240, 2))
    y = 450.0 + 150.0 * np.sin(X[:, 0]) * np.cos(X[:, 1])
    return X, y


@pytest.fixture(scope="session")
def toy_models(tmp_path_factory, toy_data):
    """A briefly trained DNN and BNN saved as legacy HDF5, plus metadata."""
    from nnpf_exporter.metadata import save_metadata
    from nnpf_exporter.training import (make_bnn, make_dnn,
                                        standardizer_stats, train)

    X, y = toy_data
    root = tmp_path_factory.mktemp("toy_models")
    stats = standardizer_stats(X, y)
    save_metadata(root / "metadata.h5", *stats)

    dnn = make_dnn([2, 8, 1], ["tanh", "linear"], seed=1)
    train(dnn, X, y, stats, epochs=3, seed=1)
    dnn.save(str(root / "dnn.h5"))

    bnn = make_bnn([2, 8, 1], ["tanh", "linear"], seed=2, kl_weight=1 / len(X))
    train(bnn, X, y, stats, epochs=3, seed=2)
    bnn.save(str(root / "bnn.h5"))

    from nnpf_exporter.export import write_csv
    write_csv(root / "inputs.csv", ["x1", "x2"], X[:60])
    return root


@pytest.fixture(scope="session")
def repo_fixtures():
    if not REPO_FIXTURES.is_dir():
        pytest.skip("committed fixture set not generated yet "
                    "(run: nnpf-export fixtures --out-dir tests/fixtures)")
    return REPO_FIXTURES
