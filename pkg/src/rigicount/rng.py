"""Pinned random streams.

Every sampler in the package draws from :class:`Stream`, a thin layer over
the Philox4x64-10 counter-based generator keyed directly by the user seed
(key = (seed mod 2**64, 0), counter starting at 0).  Only the raw 64-bit
words are taken from numpy; conversion to floats, bounded integers and
normal deviates is done here, so outputs do not depend on numpy's
``Generator`` method implementations.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_TWO_NEG_53 = 2.0 ** -53


class Stream:
    """Deterministic random stream for a single seed."""

    def __init__(self, seed: int, stream: int = 0):
        key = np.array([int(seed) & MASK64, int(stream) & MASK64], dtype=np.uint64)
        self._bg = np.random.Philox(key=key, counter=0)

    def raw(self, size: int) -> np.ndarray:
        if size <= 0:
            return np.zeros(0, dtype=np.uint64)
        return np.asarray(self._bg.random_raw(size), dtype=np.uint64)

    def uniform(self, size: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        u = (self.raw(size) >> np.uint64(11)).astype(np.float64) * _TWO_NEG_53
        return low + (high - low) * u

    def integers(self, high: int, size: int) -> np.ndarray:
        """Integers in [0, high); modulo bias is below high / 2**64."""
        if high <= 0:
            raise ValueError("high must be positive")
        return self.raw(size) % np.uint64(high)

    def field_elements(self, p: int, size: int) -> np.ndarray:
        return (self.raw(size) % np.uint64(p)).astype(np.int64)

    def normal(self, size: int) -> np.ndarray:
        # Box-Muller on our own uniforms
        half = (size + 1) // 2
        u1 = 1.0 - self.uniform(half)  # (0, 1]
        u2 = self.uniform(half)
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
        return z[:size]

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates shuffle of 0..n-1."""
        perm = np.arange(n, dtype=np.int64)
        if n < 2:
            return perm
        draws = self.raw(n - 1)
        p = perm.tolist()
        for idx, i in enumerate(range(n - 1, 0, -1)):
            j = int(draws[idx] % np.uint64(i + 1))
            p[i], p[j] = p[j], p[i]
        return np.array(p, dtype=np.int64)


def subseed(seed: int, index: int) -> int:
    """Per-sample seed: base seed plus sample index."""
    return (int(seed) + int(index)) & MASK64
