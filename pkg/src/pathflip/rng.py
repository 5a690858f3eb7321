"""Seeded, cross-platform reproducible randomness for anonymization.

The generator is pinned to a fixed, documented algorithm rather than the
stdlib's shuffle (whose exact draw sequence is not guaranteed stable), so
any implementation in any language can reproduce the same permutation from
the same 64-bit seed.
"""

from __future__ import annotations

PERMUTATION_ALGORITHM = "splitmix64-fisher-yates-v1"

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The splitmix64 sequence: state += golden gamma, then two xor-shifts."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform draw in [0, bound) by rejection, so no modulo bias."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        limit = _MASK64 + 1 - (_MASK64 + 1) % bound
        while True:
            r = self.next64()
            if r < limit:
                return r % bound


def seeded_permutation(count: int, seed: int) -> list[int]:
    """Fisher-Yates shuffle of range(count) driven by splitmix64.

    This is the permutation identified as splitmix64-fisher-yates-v1 in
    anonymized graph file headers.
    """
    rng = SplitMix64(seed)
    perm = list(range(count))
    for i in range(count - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm
