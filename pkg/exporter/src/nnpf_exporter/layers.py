"""Mean-field variational dense layer.

Each kernel entry carries a Gaussian posterior N(mu, softplus(rho)^2); the
forward pass draws one kernel realization per call (reparameterization
trick). Biases stay deterministic. Training regularizes with the analytic
KL divergence against a standard-normal prior, scaled by kl_weight
(typically 1/n_train).
"""

import keras
from keras import ops


@keras.saving.register_keras_serializable(package="nnpf_exporter")
class DenseReparam(keras.layers.Layer):
    def __init__(self, units, activation=None, rho_init=-5.0, kl_weight=0.0,
                 seed=None, **kwargs):
        super().__init__(**kwargs)
        self.units = int(units)
        self.activation = keras.activations.get(activation)
        self.rho_init = float(rho_init)
        self.kl_weight = float(kl_weight)
        self.seed = seed
        self._seed_gen = keras.random.SeedGenerator(seed)

    def build(self, input_shape):
        in_dim = int(input_shape[-1])
        self.kernel_mu = self.add_weight(
            shape=(in_dim, self.units), name="kernel_mu",
            initializer=keras.initializers.GlorotUniform(seed=self.seed))
        self.kernel_rho = self.add_weight(
            shape=(in_dim, self.units), name="kernel_rho",
            initializer=keras.initializers.Constant(self.rho_init))
        self.bias = self.add_weight(shape=(self.units,), name="bias",
                                    initializer="zeros")

    def call(self, x):
        sigma = ops.softplus(self.kernel_rho)
        eps = keras.random.normal(ops.shape(self.kernel_mu),
                                  seed=self._seed_gen, dtype=self.compute_dtype)
        kernel = self.kernel_mu + sigma * eps
        if self.kl_weight > 0.0:
            kl = ops.sum(-ops.log(sigma)
                         + 0.5 * (sigma**2 + self.kernel_mu**2) - 0.5)
            self.add_loss(self.kl_weight * kl)
        return self.activation(ops.matmul(x, kernel) + self.bias)

    def get_config(self):
        config = super().get_config()
        config.update(units=self.units,
                      activation=keras.activations.serialize(self.activation),
                      rho_init=self.rho_init, kl_weight=self.kl_weight,
                      seed=self.seed)
        return config
