"""Seedable 64-bit random stream with a published algorithm.

Heuristic runs must reproduce bit-exactly across platforms, so the random
stream is implemented here with plain Python integers instead of relying on
a library generator: xoshiro256** (Blackman & Vigna) with splitmix64 state
expansion.  One stream per run; every stochastic choice of the heuristic
draws from it in a documented order (see `tribip.heuristic`).
"""

_MASK64 = (1 << 64) - 1


class Xoshiro256StarStar:
    """xoshiro256** stream seeded from a single integer via splitmix64."""

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        s = seed & _MASK64
        state = []
        for _ in range(4):
            s = (s + 0x9E3779B97F4A7C15) & _MASK64
            z = s
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
            state.append(z ^ (z >> 31))
        self._s0, self._s1, self._s2, self._s3 = state

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        r = (s1 * 5) & _MASK64
        result = ((((r << 7) | (r >> 57)) & _MASK64) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def random(self) -> float:
        """Uniform float in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n) by 128-bit multiply-shift.

        The (negligible, < 2**-57 for n below a few hundred) modulo bias is
        accepted in exchange for a fixed one-draw-per-call contract.
        """
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        return (self.next_u64() * n) >> 64
