"""Seeded sampling generator, specified bit-for-bit so sampled sweeps are reproducible.

State initialisation: ``state = splitmix64(seed)`` (one step of SplitMix64 from
``seed mod 2^64``), replaced by ``0x9E3779B97F4A7C15`` if it comes out zero.

Each draw is one xorshift64* step::

    s ^= s >> 12; s ^= (s << 25) mod 2^64; s ^= s >> 27
    out = (s * 0x2545F4914F6CDD1D) mod 2^64

``below(n)`` maps a draw to ``[0, n)`` as ``(out * n) >> 64``.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & MASK64
        s ^= s >> 27
        self.state = s
        return (s * 0x2545F4914F6CDD1D) & MASK64

    def below(self, n: int) -> int:
        return (self.next_u64() * n) >> 64

    def indices(self, n: int, count: int) -> list[int]:
        return [self.below(n) for _ in range(count)]
