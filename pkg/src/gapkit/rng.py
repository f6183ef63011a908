"""Deterministic 64-bit splittable pseudorandom generator.

Instance generation must be bit-reproducible from (params, seed) alone and
portable across implementations, so the generator is pinned here instead of
delegated to a standard library whose stream is an implementation detail.
This is SplitMix64: state advances by the golden-gamma increment
0x9E3779B97F4A7C15 and each output word is finalized with the avalanche
multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.  A child stream is
split off by seeding a fresh generator with the parent's next output word.
Bounded draws use the plain modulus of the next word; the bias is
negligible for bounds far below 2**64 and the rule is trivial to replicate.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())

    def below(self, bound: int) -> int:
        """Draw from [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def integer(self, lo: int, hi: int) -> int:
        """Draw from the inclusive range [lo, hi]."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.below(hi - lo + 1)

    def chance(self, num: int, den: int) -> bool:
        """True with probability num/den."""
        return self.below(den) < num

    def mask(self, bits: int) -> int:
        """Uniform bits-wide integer, i.e. a random subset of [bits]."""
        if bits == 0:
            return 0
        return self.below(1 << bits)

    def distinct(self, n: int, k: int) -> list[int]:
        """k distinct values from range(n), ordered by first draw."""
        if k > n:
            raise ValueError("cannot draw more distinct values than exist")
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < k:
            v = self.below(n)
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out
