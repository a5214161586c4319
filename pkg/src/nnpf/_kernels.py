"""Jitted numerical core shared by both engines and the random source.

Everything here is written as explicit scalar loops on purpose: the
accumulation order inside the forward pass (bias first, then ascending
input index) and the draw order inside the samplers are part of the
reproducibility contract.  Do not vectorize or reorder.

Numba promotes mixed signed/unsigned arithmetic to float64, so every
integer literal touching the uint64 state is wrapped in np.uint64.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .activations import ELU_ALPHA, SELU_ALPHA, SELU_LAMBDA

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_MUL2 = np.uint64(0x94D049BB133111EB)

_U7 = np.uint64(7)
_U9 = np.uint64(9)
_U11 = np.uint64(11)
_U17 = np.uint64(17)
_U19 = np.uint64(19)
_U27 = np.uint64(27)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_U45 = np.uint64(45)
_U57 = np.uint64(57)
_FIVE = np.uint64(5)
_NINE = np.uint64(9)

_DOUBLE_UNIT = 2.0 ** -53


@njit(cache=True)
def seed_state(seed, state):
    """Expand a 64-bit seed into the 4-word state via splitmix64."""
    z = seed
    for i in range(4):
        z = z + _SM_GAMMA
        w = z
        w = (w ^ (w >> _U30)) * _SM_MUL1
        w = (w ^ (w >> _U27)) * _SM_MUL2
        state[i] = w ^ (w >> _U31)


@njit(cache=True)
def next_u64(state):
    """One xoshiro256** step; mutates state, returns the output word."""
    x = state[1] * _FIVE
    result = ((x << _U7) | (x >> _U57)) * _NINE
    t = state[1] << _U17
    state[2] ^= state[0]
    state[3] ^= state[1]
    state[1] ^= state[2]
    state[0] ^= state[3]
    state[2] ^= t
    state[3] = (state[3] << _U45) | (state[3] >> _U19)
    return result


@njit(cache=True)
def next_double(state):
    """Uniform on [0, 1): top 53 bits scaled by 2^-53."""
    return (next_u64(state) >> _U11) * _DOUBLE_UNIT


@njit(cache=True)
def fill_u64(state, out):
    for i in range(out.shape[0]):
        out[i] = next_u64(state)


@njit(cache=True)
def fill_doubles(state, out):
    for i in range(out.shape[0]):
        out[i] = next_double(state)


@njit(cache=True)
def fill_gaussians(state, cache, out):
    """Standard normals via polar Box-Muller.

    cache is a 2-slot float64 array: cache[0] is a has-spare flag,
    cache[1] the spare value.  Pairs are emitted u*m first, v*m second;
    an unconsumed v*m is parked in the cache so a later call continues
    the stream exactly where a scalar-at-a-time caller would.
    """
    n = out.shape[0]
    i = 0
    if n > 0 and cache[0] != 0.0:
        out[0] = cache[1]
        cache[0] = 0.0
        cache[1] = 0.0
        i = 1
    while i < n:
        while True:
            u = 2.0 * next_double(state) - 1.0
            v = 2.0 * next_double(state) - 1.0
            q = u * u + v * v
            if q < 1.0 and q > 0.0:
                break
        m = math.sqrt(-2.0 * math.log(q) / q)
        out[i] = u * m
        i += 1
        if i < n:
            out[i] = v * m
            i += 1
        else:
            cache[0] = 1.0
            cache[1] = v * m


@njit(cache=True)
def _act_scalar(act_id, z):
    # Ids follow activations.ACTIVATION_ORDER.
    if act_id == 0:
        return z if z > 0.0 else 0.0
    if act_id == 1:
        return z if z > 0.0 else ELU_ALPHA * math.expm1(z)
    if act_id == 2:
        if z > 0.0:
            return SELU_LAMBDA * z
        return SELU_LAMBDA * (SELU_ALPHA * math.expm1(z))
    if act_id == 3:
        if z > 0.0:
            return z + math.log1p(math.exp(-z))
        return math.log1p(math.exp(z))
    if act_id == 4:
        return math.tanh(z)
    return z


@njit(cache=True)
def forward(params, widths, act_ids, has_std, x_mean, x_std, y_mean, y_std, x, a, b, y_out):
    """One standardize -> layers -> unstandardize pass.

    params is the flat canonical parameter vector (per layer: W row-major,
    then b).  a and b are scratch buffers of length >= max(widths); the
    result lands in y_out.  Both engines funnel through this exact code so
    the sigma=0 degeneracy holds bitwise.
    """
    n_in = widths[0]
    if has_std:
        for i in range(n_in):
            a[i] = (x[i] - x_mean[i]) / x_std[i]
    else:
        for i in range(n_in):
            a[i] = x[i]
    src = a
    dst = b
    off = 0
    n_layers = act_ids.shape[0]
    for layer in range(n_layers):
        m = widths[layer]
        n = widths[layer + 1]
        act_id = act_ids[layer]
        boff = off + m * n
        for j in range(n):
            acc = params[boff + j]
            for i in range(m):
                acc += src[i] * params[off + i * n + j]
            dst[j] = _act_scalar(act_id, acc)
        off = boff + n
        tmp = src
        src = dst
        dst = tmp
    n_out = widths[n_layers]
    if has_std:
        for j in range(n_out):
            y_out[j] = src[j] * y_std[j] + y_mean[j]
    else:
        for j in range(n_out):
            y_out[j] = src[j]


@njit(cache=True)
def forward_batch(params, widths, act_ids, has_std, x_mean, x_std, y_mean, y_std, X, a, b, Y):
    for r in range(X.shape[0]):
        forward(params, widths, act_ids, has_std, x_mean, x_std, y_mean, y_std, X[r], a, b, Y[r])


@njit(cache=True)
def sample_rows(mu, sigma, widths, act_ids, has_std, x_mean, x_std, y_mean, y_std,
                x, state, cache, pbuf, a, b, out):
    """Monte Carlo rows for one input: realize weights, run the forward pass.

    Per row: one gaussian per parameter, drawn in canonical flat order,
    realized as mu + sigma * eps in pbuf, then the shared forward pass.
    Rows consume the single stream strictly in order.
    """
    n_params = pbuf.shape[0]
    for r in range(out.shape[0]):
        fill_gaussians(state, cache, pbuf)
        for k in range(n_params):
            pbuf[k] = mu[k] + sigma[k] * pbuf[k]
        forward(pbuf, widths, act_ids, has_std, x_mean, x_std, y_mean, y_std, x, a, b, out[r])
