"""SplitMix64: a tiny generator whose output is fully pinned down by its seed.

It is specified in a dozen lines of integer arithmetic, so simulated datasets
can be regenerated bit-for-bit by any other implementation.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform on [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def exponential(self) -> float:
        return -math.log1p(-self.uniform())

    def normal(self) -> float:
        """Standard normal via Box-Muller; one value per call, the partner is discarded."""
        u1 = 1.0 - self.uniform()  # (0, 1]
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def below(self, n: int) -> int:
        """Integer in [0, n) by rejection, free of modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def choice(self, probs) -> int:
        """Index drawn by inverse CDF from a probability vector."""
        u = self.uniform()
        acc = 0.0
        last = 0
        for i, pr in enumerate(probs):
            if pr <= 0:
                continue
            last = i
            acc += pr
            if u < acc:
                return i
        return last

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
