"""Deterministic counter-based random number generation.

Every stream is a pure function of ``(seed, counter)``: draw ``i`` of the
stream is ``finalize64(seed + (i + 1) * GOLDEN)`` where ``finalize64`` is the
SplitMix64 output mix. Because no hidden state evolves between calls beyond
the counter, the same seed reproduces the same sequence bit-for-bit on any
platform, and disjoint counter ranges can be generated independently (which
keeps multi-threaded experiment runs reproducible).

Normal variates use the Box-Muller transform: pairs of uniforms ``(u1, u2)``
with ``u1`` in (0, 1] map to ``sqrt(-2 ln u1) * (cos, sin)(2 pi u2)``. Both
outputs of each pair are consumed in order; an odd-length request discards
the trailing partner, which costs one draw but keeps the counter arithmetic
trivially reproducible.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1E3E5757
_MIX2 = 0x94D049BB133111EB

_U64_GOLDEN = np.uint64(_GOLDEN)
_U64_MIX1 = np.uint64(_MIX1)
_U64_MIX2 = np.uint64(_MIX2)
_SHIFT_30 = np.uint64(30)
_SHIFT_27 = np.uint64(27)
_SHIFT_31 = np.uint64(31)
_SHIFT_11 = np.uint64(11)
_INV_2_53 = float(2.0 ** -53)


def splitmix64(value: int) -> int:
    """Advance-and-finalize one SplitMix64 step of a 64-bit integer."""
    z = (int(value) + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def mix64(*parts: int) -> int:
    """Mix any number of integers into a single well-avalanched 64-bit value.

    Used to derive independent stream seeds, e.g. per-trial seeds from
    ``mix64(master_seed, m, k, trial_index)`` or per-block seeds from
    ``mix64(master_seed, block_index)``. The arguments are folded left to
    right, so both the values and their order matter.
    """
    acc = 0
    for part in parts:
        acc = splitmix64(acc ^ (int(part) & _MASK64))
    return acc


def _finalize_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _SHIFT_30)) * _U64_MIX1
    z = (z ^ (z >> _SHIFT_27)) * _U64_MIX2
    return z ^ (z >> _SHIFT_31)


class Rng:
    """Seeded counter-style generator producing reproducible streams.

    Parameters
    ----------
    seed : int
        Stream identifier; reduced modulo 2**64.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._counter = 0

    def raw(self, count: int) -> np.ndarray:
        """Return the next ``count`` raw 64-bit words as a uint64 array."""
        if count < 0:
            raise ValueError("count must be non-negative")
        start = self._counter
        self._counter += count
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        base = np.uint64(self.seed) + idx * _U64_GOLDEN
        return _finalize_vec(base)

    def uniform01(self, count: int) -> np.ndarray:
        """Uniform doubles in [0, 1) with 53-bit resolution."""
        return (self.raw(count) >> _SHIFT_11).astype(np.float64) * _INV_2_53

    def uniform(self, count: int, low: float, high: float) -> np.ndarray:
        """Uniform doubles in [low, high)."""
        return low + (high - low) * self.uniform01(count)

    def standard_normal(self, count: int) -> np.ndarray:
        """Standard normal draws via the Box-Muller transform."""
        if count < 0:
            raise ValueError("count must be non-negative")
        pairs = (count + 1) // 2
        words = self.raw(2 * pairs)
        # u1 lies in (0, 1] so the log below is always finite.
        u1 = ((words[:pairs] >> _SHIFT_11).astype(np.float64) + 1.0) * _INV_2_53
        u2 = (words[pairs:] >> _SHIFT_11).astype(np.float64) * _INV_2_53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]

    def signs(self, count: int) -> np.ndarray:
        """Random +/-1.0 values with equal probability."""
        bit = (self.raw(count) >> np.uint64(63)).astype(np.float64)
        return 2.0 * bit - 1.0

    def integers_below(self, count: int, bound: int) -> np.ndarray:
        """Integers uniform on {0, ..., bound - 1}."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        vals = np.floor(self.uniform01(count) * bound).astype(np.int64)
        # floor(u * bound) == bound is impossible for u < 1, but stay safe
        # against any future change of the uniform's closed/open bounds.
        return np.minimum(vals, bound - 1)

    def subset(self, population: int, size: int) -> np.ndarray:
        """A uniformly random ``size``-subset of {0, ..., population - 1}.

        Partial Fisher-Yates shuffle; the result is returned in ascending
        order. Consumes exactly ``size`` raw draws.
        """
        if size < 0 or size > population:
            raise ValueError("size must satisfy 0 <= size <= population")
        pool = np.arange(population)
        # One draw per swap so the counter advances by exactly `size`.
        for i in range(size):
            j = i + int(self.integers_below(1, population - i)[0])
            pool[i], pool[j] = pool[j], pool[i]
        return np.sort(pool[:size])


def sample_standard_normal(rng: Rng, count: int) -> np.ndarray:
    """Draw ``count`` standard normal values from ``rng``."""
    return rng.standard_normal(count)
