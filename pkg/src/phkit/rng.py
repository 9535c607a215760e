"""SplitMix64 pseudo-random stream.

Every generator in the package draws from this stream so that a seed maps to
bit-identical output on any platform.  SplitMix64 is counter based: the k-th
output (k = 1, 2, ...) is ``mix(seed + k * GAMMA mod 2**64)``, which lets whole
blocks be produced with vectorised uint64 arithmetic.

Doubles are formed from the top 53 bits: ``(x >> 11) * 2**-53`` in [0, 1).
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Sequential SplitMix64 stream.

    >>> SplitMix64(0).next_u64()
    16294208416658607535
    """

    def __init__(self, seed: int = 0):
        self.state = int(seed) & _MASK

    def u64(self, count: int) -> np.ndarray:
        """Next ``count`` raw 64-bit outputs, in stream order."""
        count = int(count)
        if count <= 0:
            return np.zeros(0, dtype=np.uint64)
        k = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + k * np.uint64(GAMMA)
            out = _mix(z)
        self.state = (self.state + count * GAMMA) & _MASK
        return out

    def next_u64(self) -> int:
        return int(self.u64(1)[0])

    def random(self, count: int) -> np.ndarray:
        """``count`` doubles uniform in [0, 1)."""
        return (self.u64(count) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)

    def uniform(self, low: float, high: float, count: int) -> np.ndarray:
        return low + (high - low) * self.random(count)

    def randbelow(self, bound: int) -> int:
        """One integer in ``[0, bound)`` by Lemire's multiply-shift (no modulo bias
        beyond 2**-64 per draw)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * int(bound)) >> 64

    def sample_without_replacement(self, population: int, count: int) -> np.ndarray:
        """``count`` distinct integers from ``range(population)`` via a partial
        Fisher-Yates shuffle; returned in draw order."""
        if not 0 <= count <= population:
            raise ValueError("count must lie in [0, population]")
        # sparse swap table keeps memory O(count) for large populations
        swapped: dict[int, int] = {}
        out = np.empty(count, dtype=np.int64)
        for i in range(count):
            j = i + self.randbelow(population - i)
            vi = swapped.get(i, i)
            vj = swapped.get(j, j)
            swapped[j] = vi
            out[i] = vj
        return out
