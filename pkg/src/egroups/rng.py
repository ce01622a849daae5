"""Seeded pseudo-random numbers with a frozen, portable algorithm.

All randomized routines in this package (matrix scrambling, Las Vegas
splitting, survey sampling) draw from SplitMix64 so that a seed determines
the exact same stream on every platform and Python version.  The generator
is the standard SplitMix64 step: state advances by the odd constant
0x9E3779B97F4A7C15 and the output is finalized with two xor-shift-multiply
rounds (Steele, Lea, Flood 2014).
"""

MASK64 = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection on the top range."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = MASK64 - (MASK64 + 1) % n
        while True:
            r = self.next_u64()
            if r <= limit:
                return r % n

    def randints(self, n: int, count: int) -> list:
        return [self.randint(n) for _ in range(count)]

    def spawn(self, tag: int) -> "SplitMix64":
        """Independent child stream; used to give sub-tasks their own seeds."""
        return SplitMix64(self.next_u64() ^ (tag * 0x9E3779B97F4A7C15) & MASK64)
