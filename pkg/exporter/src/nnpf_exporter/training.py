"""Fixture model builders, training loop, and the synthetic CHF dataset."""

import keras
import numpy as np

from .layers import DenseReparam


def make_dnn(widths, activations, seed):
    layers = [keras.layers.Input(shape=(widths[0],))]
    for i, (units, act) in enumerate(zip(widths[1:], activations)):
        layers.append(keras.layers.Dense(
            units, activation=act,
            kernel_initializer=keras.initializers.GlorotUniform(seed=seed + i)))
    return keras.Sequential(layers)


def make_bnn(widths, activations, seed, kl_weight, rho_init=-5.0):
    layers = [keras.layers.Input(shape=(widths[0],))]
    for i, (units, act) in enumerate(zip(widths[1:], activations)):
        layers.append(DenseReparam(units, activation=act, rho_init=rho_init,
                                   kl_weight=kl_weight, seed=seed + i))
    return keras.Sequential(layers)


def standardizer_stats(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    return (X.mean(axis=0), X.std(axis=0),
            np.array([y.mean()]), np.array([y.std()]))


def train(model, X, y, stats, epochs, batch_size=32, learning_rate=1e-3, seed=0):
    x_mean, x_std, y_mean, y_std = stats
    Xs = ((X - x_mean) / x_std).astype(np.float32)
    ys = ((y.reshape(-1, 1) - y_mean) / y_std).astype(np.float32)
    keras.utils.set_random_seed(seed)
    steps = epochs * -(-len(Xs) // batch_size)
    schedule = keras.optimizers.schedules.CosineDecay(learning_rate, steps)
    model.compile(optimizer=keras.optimizers.Adam(schedule), loss="mse")
    history = model.fit(Xs, ys, epochs=epochs, batch_size=batch_size, verbose=0)
    return history.history["loss"][-1]


CHF_COLUMNS = ("diameter", "length", "pressure", "mass_flux", "subcooling")
CHF_RANGES = {"diameter": (0.002, 0.016), "length": (0.5, 6.0),
              "pressure": (500.0, 16000.0), "mass_flux": (300.0, 6000.0),
              "subcooling": (20.0, 1200.0)}


def chf_surface(D, L, P, G, dH):
    """Smooth tube-CHF trend: kW/m^2 from diameter (m), heated length (m),
    pressure (kPa), mass flux (kg/m^2 s), and inlet subcooling (kJ/kg)."""
    return (2500.0
            * (0.008 / D) ** 0.4
            * (G / 2000.0) ** 0.45
            * (1.0 + dH / 800.0)
            * (2.0 / (1.0 + L / 2.0)) ** 0.3
            * (0.55 + 0.45 * np.exp(-np.log(P / 3000.0) ** 2 / 2.88)))


def generate_chf(n, seed, noise=0.02):
    rng = np.random.default_rng(seed)
    cols = [rng.uniform(*CHF_RANGES[name], size=n) for name in CHF_COLUMNS]
    X = np.column_stack(cols)
    q = chf_surface(*cols)
    y = q * (1.0 + noise * rng.standard_normal(n))
    return X, y


def r_squared(pred, truth):
    pred = np.asarray(pred).reshape(-1)
    truth = np.asarray(truth).reshape(-1)
    ss_res = float(np.sum((pred - truth) ** 2))
    ss_tot = float(np.sum((truth - truth.mean()) ** 2))
    return 1.0 - ss_res / ss_tot


def mean_ape(pred, truth):
    pred = np.asarray(pred).reshape(-1)
    truth = np.asarray(truth).reshape(-1)
    return float(np.mean(np.abs((pred - truth) / truth))) * 100.0
