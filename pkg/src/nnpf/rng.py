"""Seedable deterministic random source.

xoshiro256** over a 4-word state, seeded by four successive splitmix64
outputs of the 64-bit seed.  Gaussians come from polar Box-Muller with a
one-value spare cache, so the draw sequence is identical whether values
are pulled one at a time or in bulk.  The same seed yields the same
stream on every platform and in every process.
"""

from __future__ import annotations

import numpy as np

from . import _kernels

_MASK64 = 0xFFFFFFFFFFFFFFFF


class Rng:
    """Single-owner random stream.  Not thread-safe; never share one
    instance between threads."""

    __slots__ = ("_state", "_cache", "_one")

    def __init__(self, seed: int = 0):
        self._state = np.empty(4, dtype=np.uint64)
        self._cache = np.zeros(2, dtype=np.float64)
        self._one = np.empty(1, dtype=np.float64)
        _kernels.seed_state(np.uint64(int(seed) & _MASK64), self._state)

    def next_u64(self) -> int:
        return int(_kernels.next_u64(self._state))

    def next_double(self) -> float:
        """Uniform on [0, 1)."""
        return float(_kernels.next_double(self._state))

    def next_gaussian(self) -> float:
        """One standard normal draw."""
        _kernels.fill_gaussians(self._state, self._cache, self._one)
        return float(self._one[0])

    def fill_gaussians(self, out: np.ndarray) -> np.ndarray:
        """Fill a float64 vector with standard normals, in stream order."""
        if out.dtype != np.float64 or out.ndim != 1:
            raise ValueError("out must be a 1-D float64 array")
        _kernels.fill_gaussians(self._state, self._cache, out)
        return out

    def gaussians(self, n: int) -> np.ndarray:
        out = np.empty(int(n), dtype=np.float64)
        _kernels.fill_gaussians(self._state, self._cache, out)
        return out

    def doubles(self, n: int) -> np.ndarray:
        out = np.empty(int(n), dtype=np.float64)
        _kernels.fill_doubles(self._state, out)
        return out

    def shuffle_indices(self, n: int) -> np.ndarray:
        """Fisher-Yates permutation of range(n), one double per step."""
        idx = np.arange(n, dtype=np.int64)
        for i in range(n - 1, 0, -1):
            j = int(self.next_double() * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        return idx
