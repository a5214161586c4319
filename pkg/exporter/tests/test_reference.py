import numpy as np

from conftest import run_nnpf

from nnpf_exporter import emit_reference, export_dnn, make_sigma_zero
from nnpf_exporter.export import read_csv, write_csv


def test_deterministic_reference_reproducible(toy_models):
    a, b = toy_models / "ref_a.csv", toy_models / "ref_b.csv"
    for out in (a, b):
        emit_reference(toy_models / "dnn.h5", toy_models / "metadata.h5",
                       toy_models / "inputs.csv", out)
    assert a.read_bytes() == b.read_bytes()
    header, data = read_csv(a)
    assert header == ["y_ref"]
    assert data.shape == (60, 1)


def test_fresh_model_parity_through_primary(toy_models, tmp_path):
    # freshly trained model: exported predictions must match the framework's
    # float64 forward pass within the engine parity bounds
    rng = np.random.default_rng(11)
    inputs = tmp_path / "wide_inputs.csv"
    write_csv(inputs, ["x1", "x2"], rng.uniform(0, 6.28, size=(1000, 2)))

    export_dnn(toy_models / "dnn.h5", toy_models / "metadata.h5",
               tmp_path / "fresh.nnpf")
    emit_reference(toy_models / "dnn.h5", toy_models / "metadata.h5",
                   inputs, tmp_path / "fresh_ref.csv")
    run_nnpf("predict", "--model", tmp_path / "fresh.nnpf",
             "--input", inputs, "--output", tmp_path / "fresh_pred.csv")

    _, ref = read_csv(tmp_path / "fresh_ref.csv")
    _, pred = read_csv(tmp_path / "fresh_pred.csv")
    resid = np.abs(pred[:, 0] - ref[:, 0])
    assert resid.max() <= 1e-3
    assert resid.mean() <= 1e-4
    assert np.mean(resid <= 1e-3) >= 0.99


def test_float32_reference_tracks_float64(toy_models, tmp_path):
    f64, f32 = tmp_path / "r64.csv", tmp_path / "r32.csv"
    emit_reference(toy_models / "dnn.h5", toy_models / "metadata.h5",
                   toy_models / "inputs.csv", f64)
    emit_reference(toy_models / "dnn.h5", toy_models / "metadata.h5",
                   toy_models / "inputs.csv", f32, float32=True)
    _, a = read_csv(f64)
    _, b = read_csv(f32)
    # same weights, training precision: differences sit at float32 scale
    gap = np.abs(a - b).max()
    assert 0.0 < gap < 1e-2


def test_sigma_zero_degeneracy_through_primary(toy_models, tmp_path):
    export_dnn(toy_models / "dnn.h5", toy_models / "metadata.h5",
               tmp_path / "mu.nnpf")
    make_sigma_zero(toy_models / "dnn.h5", toy_models / "metadata.h5",
                    tmp_path / "edge.nnpf")
    run_nnpf("predict", "--model", tmp_path / "mu.nnpf",
             "--input", toy_models / "inputs.csv",
             "--output", tmp_path / "mu.csv")
    run_nnpf("predict", "--model", tmp_path / "edge.nnpf",
             "--input", toy_models / "inputs.csv",
             "--output", tmp_path / "edge.csv", "--samples", 1, "--seed", 3)
    _, mu = read_csv(tmp_path / "mu.csv")
    header, edge = read_csv(tmp_path / "edge.csv")
    assert header[0] == "y_mean"
    assert np.array_equal(edge[:, 0], mu[:, 0])


def test_bnn_reference_mean_stable_across_seeds(toy_models, tmp_path):
    outs = []
    for seed in (77, 88):
        out = tmp_path / f"bnn_ref_{seed}.csv"
        emit_reference(toy_models / "bnn.h5", toy_models / "metadata.h5",
                       toy_models / "inputs.csv", out,
                       n_samples=20000, seed=seed)
        _, data = read_csv(out)
        outs.append(data)
    m1, s1 = outs[0][:, 0], outs[0][:, 1]
    m2, s2 = outs[1][:, 0], outs[1][:, 1]
    assert np.all(outs[0][:, 2] == 20000.0)
    bound = 4.0 * np.sqrt(s1**2 + s2**2) / np.sqrt(20000.0)
    assert np.all(np.abs(m1 - m2) < bound)
