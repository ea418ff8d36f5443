"""Deterministic 64-bit generator shared by instance sampling and slicing.

The recurrence is SplitMix64::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic modulo 2**64.  It is fully specified here so that instances
generated from a seed are reproducible independently of the Python version.
"""

from __future__ import annotations

from sympy import nextprime

MASK64 = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        """Integer in ``[0, m)``; plain modulo reduction (bias below 2^-40 for our ranges)."""
        if m <= 0:
            raise ValueError("upper bound must be positive")
        return self.next() % m

    def integer(self, lo: int, hi: int) -> int:
        """Integer in the closed range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)


def random_prime(seed: int, bits: int = 30) -> int:
    """A prime just above a seeded random ``bits``-bit integer."""
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    start = (1 << (bits - 1)) | rng.below(1 << (bits - 1))
    p = nextprime(start)
    while p >= 1 << bits:
        p = nextprime(1 << (bits - 1))
    return p
