"""Counter-based pseudorandom generator for deterministic simulation.

The generator state is two 64-bit integers (seed, counter).  Draw number k
is a pure function of (seed, k), so saving and restoring the generator is
just copying two ints, and replay is bit-identical on every platform and
in every runtime that has 64-bit integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Avalanche a 64-bit value (splitmix64 finalizer)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


@dataclass
class CounterRng:
    """Splittable counter-based generator.

    ``next_u64`` increments the counter and mixes (seed + counter * gamma),
    which is the splitmix64 sequence for stream ``seed``.
    """

    seed: int
    counter: int = 0

    def __post_init__(self) -> None:
        self.seed &= MASK64
        self.counter &= MASK64

    def next_u64(self) -> int:
        self.counter = (self.counter + 1) & MASK64
        return mix64((self.seed + self.counter * _GAMMA) & MASK64)

    def randrange(self, n: int) -> int:
        """Uniform int in [0, n). Modulo bias is negligible for n << 2**64."""
        if n <= 0:
            raise ValueError("randrange() needs n >= 1")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform int in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError("randint() needs lo <= hi")
        return lo + self.randrange(hi - lo + 1)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (self.next_u64() / 2**64) * (hi - lo)

    def random(self) -> float:
        return self.next_u64() / 2**64

    def choice(self, seq):
        if not seq:
            raise IndexError("choice() on empty sequence")
        return seq[self.randrange(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def spawn(self, stream: int) -> "CounterRng":
        """Derive an independent generator for a numbered substream."""
        return CounterRng(mix64(self.seed ^ mix64(stream)), 0)

    def clone(self) -> "CounterRng":
        return CounterRng(self.seed, self.counter)
