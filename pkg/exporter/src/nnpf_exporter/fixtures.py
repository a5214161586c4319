"""Trains the committed fixture models and writes the fixture set.

The sinusoid data comes from the inference package's own generator so the
committed test split is exactly what its acceptance run expects; all other
interaction with that package goes through files. Keras model files and
training CSVs are scratch artifacts; only NNPF containers, test-split CSVs,
reference predictions, and provenance.json land in the output directory.
"""

import json
import platform
import subprocess
import tempfile
from datetime import date
from pathlib import Path

import keras
import numpy as np

from . import container
from .export import (emit_reference, export_bnn, export_dnn, load_model,
                     read_csv, write_csv)
from .metadata import save_metadata
from .training import (CHF_COLUMNS, generate_chf, make_bnn, make_dnn,
                       mean_ape, r_squared, standardizer_stats, train)

REFERENCE_SAMPLES = 20000
REFERENCE_SEED = 123

SINUSOID_DNN = dict(widths=[2, 16, 16, 1],
                    activations=["tanh", "tanh", "linear"],
                    seed=10, epochs=500, batch_size=32, learning_rate=3e-3)
SINUSOID_BNN = dict(widths=[2, 16, 16, 16, 1],
                    activations=["tanh", "tanh", "tanh", "linear"],
                    seed=11, epochs=500, batch_size=32, learning_rate=3e-3,
                    rho_init=-5.0)
CHF_DNN = dict(widths=[5, 32, 32, 32, 32, 32, 32, 32, 1],
               activations=["relu"] * 7 + ["linear"],
               seed=12, epochs=500, batch_size=128, learning_rate=1e-3)
CHF_BNN = dict(widths=[5, 32, 32, 32, 32, 1],
               activations=["tanh"] * 4 + ["linear"],
               seed=13, epochs=500, batch_size=128, learning_rate=1e-3,
               rho_init=-5.0)


def run_primary(*args):
    proc = subprocess.run(["nnpf", *map(str, args)],
                          capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"nnpf {' '.join(map(str, args))} failed:\n"
                           f"{proc.stdout}{proc.stderr}")
    return proc.stdout


def make_sigma_zero(model_file, metadata_file, out_nnpf):
    """Bayesian container whose mu tensors copy a trained deterministic
    model and whose sigmas are exactly zero."""
    manifest = export_dnn(model_file, metadata_file, out_nnpf)  # reuse detection
    blob = Path(out_nnpf).read_bytes()
    det = container.read(blob)
    tensors = []
    for i in range(0, len(det.tensors), 2):
        W, b = det.tensors[i], det.tensors[i + 1]
        tensors += [W, np.zeros_like(W), b, np.zeros_like(b)]
    bay = container.Container(kind="bayesian", widths=det.widths,
                              activations=det.activations, tensors=tensors,
                              standardizer=det.standardizer)
    Path(out_nnpf).write_bytes(container.write(bay))
    return manifest


def _train_and_save(config, X, y, scratch, name, bayesian, quick):
    epochs = 3 if quick else config["epochs"]
    stats = standardizer_stats(X, y)
    if bayesian:
        model = make_bnn(config["widths"], config["activations"],
                         seed=config["seed"], kl_weight=1.0 / len(X),
                         rho_init=config["rho_init"])
    else:
        model = make_dnn(config["widths"], config["activations"],
                         seed=config["seed"])
    loss = train(model, X, y, stats, epochs=epochs,
                 batch_size=config["batch_size"],
                 learning_rate=config["learning_rate"], seed=config["seed"])
    model_file = scratch / f"{name}.h5"
    metadata_file = scratch / f"{name}_metadata.h5"
    model.save(model_file)
    save_metadata(metadata_file, *stats)
    return model_file, metadata_file, float(loss)


def train_fixtures(out_dir, quick=False):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    provenance = {
        "generated": date.today().isoformat(),
        "environment": {"python": platform.python_version(),
                        "keras": keras.__version__,
                        "numpy": np.__version__},
        "reference": {"n_samples": REFERENCE_SAMPLES, "seed": REFERENCE_SEED,
                      "precision": "float64 framework ops (float32 variant "
                                   "kept for the sinusoid DNN)"},
        "models": {},
    }

    with tempfile.TemporaryDirectory() as tmp:
        scratch = Path(tmp)

        # sinusoid: generated by the inference package itself
        gen_cmd = ["gen", "sinusoid", "--n", 5000, "--seed", 42,
                   "--out", scratch / "sinusoid.csv"]
        run_primary(*gen_cmd)
        _, train_rows = read_csv(scratch / "sinusoid_train.csv")
        header, test_rows = read_csv(scratch / "sinusoid_test.csv")
        X_tr, y_tr = train_rows[:, :2], train_rows[:, 2]
        X_te, y_te = test_rows[:, :2], test_rows[:, 2]
        write_csv(out / "sinusoid_test_inputs.csv", header[:2], X_te)
        write_csv(out / "sinusoid_test_truth.csv", header[2:], y_te.reshape(-1, 1))
        provenance["datasets"] = {
            "sinusoid": {"command": "nnpf " + " ".join(map(str, gen_cmd)),
                         "train_rows": len(X_tr), "test_rows": len(X_te)},
            "chf": {"generator": "nnpf_exporter.training.generate_chf",
                    "n": 9190, "seed": 7, "noise": 0.02,
                    "split": "first 8271 train / last 919 test"},
        }

        jobs = [("sinusoid_dnn", SINUSOID_DNN, False, X_tr, y_tr, X_te, y_te,
                 out / "sinusoid_test_inputs.csv"),
                ("sinusoid_bnn", SINUSOID_BNN, True, X_tr, y_tr, X_te, y_te,
                 out / "sinusoid_test_inputs.csv")]

        Xc, yc = generate_chf(9190, seed=7)
        if quick:
            Xc, yc = Xc[:800], yc[:800]
        n_chf_train = int(round(0.9 * len(Xc)))
        Xc_tr, yc_tr = Xc[:n_chf_train], yc[:n_chf_train]
        Xc_te, yc_te = Xc[n_chf_train:], yc[n_chf_train:]
        write_csv(out / "chf_test_inputs.csv", list(CHF_COLUMNS), Xc_te)
        write_csv(out / "chf_test_truth.csv", ["q_chf"], yc_te.reshape(-1, 1))
        jobs += [("chf_dnn", CHF_DNN, False, Xc_tr, yc_tr, Xc_te, yc_te,
                  out / "chf_test_inputs.csv"),
                 ("chf_bnn", CHF_BNN, True, Xc_tr, yc_tr, Xc_te, yc_te,
                  out / "chf_test_inputs.csv")]

        for name, config, bayesian, X, y, X_test, y_test, inputs_csv in jobs:
            model_file, metadata_file, loss = _train_and_save(
                config, X, y, scratch, name, bayesian, quick)
            nnpf_file = out / f"{name}.nnpf"
            ref_file = out / f"{name}_reference.csv"
            if bayesian:
                export_bnn(model_file, metadata_file, nnpf_file)
                samples = 200 if quick else REFERENCE_SAMPLES
                emit_reference(model_file, metadata_file, inputs_csv, ref_file,
                               n_samples=samples, seed=REFERENCE_SEED)
                _, ref = read_csv(ref_file)
                pred = ref[:, 0]
            else:
                export_dnn(model_file, metadata_file, nnpf_file)
                emit_reference(model_file, metadata_file, inputs_csv, ref_file)
                _, ref = read_csv(ref_file)
                pred = ref[:, 0]
            record = dict(config)
            record.update(final_train_loss=loss, quick=quick,
                          test_r2=r_squared(pred, y_test),
                          test_mean_ape=mean_ape(pred, y_test))
            provenance["models"][name] = record
            run_primary("validate", "--model", nnpf_file)

        emit_reference(scratch / "sinusoid_dnn.h5",
                       scratch / "sinusoid_dnn_metadata.h5",
                       out / "sinusoid_test_inputs.csv",
                       out / "sinusoid_dnn_reference_f32.csv", float32=True)
        make_sigma_zero(scratch / "sinusoid_dnn.h5",
                        scratch / "sinusoid_dnn_metadata.h5",
                        out / "sinusoid_bnn_sigma0.nnpf")
        run_primary("validate", "--model", out / "sinusoid_bnn_sigma0.nnpf")

    (out / "provenance.json").write_text(json.dumps(provenance, indent=2) + "\n")
    return provenance
