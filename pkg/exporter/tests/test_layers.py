import keras
import numpy as np

from nnpf_exporter.layers import DenseReparam


def _layer_model(**kwargs):
    model = keras.Sequential([keras.layers.Input(shape=(3,)),
                              DenseReparam(4, activation="tanh", **kwargs)])
    return model


def test_forward_is_stochastic():
    model = _layer_model(seed=0)
    x = np.ones((5, 3), dtype=np.float32)
    a = model(x).numpy()
    b = model(x).numpy()
    assert a.shape == (5, 4)
    assert not np.array_equal(a, b)  # fresh kernel draw per call


def test_tiny_scale_collapses_to_mean_forward():
    model = _layer_model(seed=0, rho_init=-60.0)
    layer = model.layers[-1]
    x = np.linspace(-1, 1, 15).reshape(5, 3).astype(np.float32)
    got = model(x).numpy()
    want = np.tanh(x @ layer.kernel_mu.numpy() + layer.bias.numpy())
    assert np.allclose(got, want, rtol=0, atol=1e-6)


def test_kl_loss_registered():
    with_kl = _layer_model(seed=0, kl_weight=0.1)
    without = _layer_model(seed=0, kl_weight=0.0)
    x = np.ones((2, 3), dtype=np.float32)
    with_kl(x)
    without(x)
    assert len(with_kl.losses) == 1 and float(with_kl.losses[0]) > 0.0
    assert not without.losses


def test_h5_roundtrip_preserves_weights(tmp_path):
    model = _layer_model(seed=7, rho_init=-4.0, kl_weight=0.5)
    model(np.zeros((1, 3), dtype=np.float32))
    path = str(tmp_path / "m.h5")
    model.save(path)
    back = keras.models.load_model(path, compile=False)
    layer, orig = back.layers[-1], model.layers[-1]
    assert isinstance(layer, DenseReparam)
    assert layer.units == 4 and layer.kl_weight == 0.5 and layer.rho_init == -4.0
    for a, b in zip(layer.get_weights(), orig.get_weights()):
        assert np.array_equal(a, b)
