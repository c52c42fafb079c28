"""Pure-python mirror of the library's seeded generator.

Implements splitmix64 state expansion and xoshiro256++ from their published
definitions, plus the same distribution mappings the C++ side uses. Used to
freeze cross-language reference values into the unit tests and to produce
the exact sample arrays behind the Shapiro-Wilk oracle data.
"""

import math

M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(state):
    state = (state + GOLDEN) & M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return state, z ^ (z >> 31)


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & M64


class Rng:
    def __init__(self, seed, stream=0):
        sm = (seed + stream * GOLDEN) & M64
        self.s = []
        for _ in range(4):
            sm, word = _splitmix64(sm)
            self.s.append(word)
        if not any(self.s):
            self.s[0] = 1

    def next_u64(self):
        s = self.s
        result = (_rotl((s[0] + s[3]) & M64, 23) + s[0]) & M64
        t = (s[1] << 17) & M64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform01(self):
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniform(self, lo, hi):
        return lo + self.uniform01() * (hi - lo)

    def normal(self, mean=0.0, stddev=1.0):
        u1 = 1.0 - self.uniform01()
        u2 = self.uniform01()
        radius = math.sqrt(-2.0 * math.log(u1))
        return mean + stddev * radius * math.cos(2.0 * math.pi * u2)

    def exponential(self, rate):
        return -math.log(1.0 - self.uniform01()) / rate

    def below(self, n):
        k = int(self.uniform01() * float(n))
        return k if k < n else n - 1

    def permutation(self, n):
        p = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            p[i], p[j] = p[j], p[i]
        return p


if __name__ == "__main__":
    rng = Rng(42, 0)
    print("u64:", [rng.next_u64() for _ in range(4)])
    rng = Rng(42, 0)
    print("uniform01:", [rng.uniform01().hex() for _ in range(4)])
    rng = Rng(42, 1)
    print("normal:", [rng.normal().hex() for _ in range(3)])
    rng = Rng(42, 2)
    print("exponential:", [rng.exponential(1.0).hex() for _ in range(3)])
    rng = Rng(7, 5)
    print("permutation(8):", rng.permutation(8))
