"""Deterministic 64-bit random number generator and seed derivation.

All samplers in this package draw from :class:`SplitMix64`, a counter-based
generator with a fully documented state transition so that streams can be
reproduced in any language:

    state' = (state + 0x9E3779B97F4A7C15) mod 2**64
    output = mix64(state')

where ``mix64`` is the finalizer

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;  z &= 2**64-1
    z ^= z >> 27;  z *= 0x94D049BB133111EB;  z &= 2**64-1
    z ^= z >> 31

Per-trial seeds are derived from a master seed by the documented mixing
function ``per_trial_seed(master, i) = mix64((master + (i+1)*GAMMA) mod 2**64)``,
so parallel trials are reproducible independently of worker scheduling.
"""

from __future__ import annotations

import math
from bisect import bisect_left

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 output finalizer on a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def per_trial_seed(master_seed: int, trial_index: int) -> int:
    """Derive the seed of trial ``trial_index`` from ``master_seed``."""
    return mix64((master_seed + (trial_index + 1) * GAMMA) & MASK64)


class SplitMix64:
    """Counter-based 64-bit generator; see the module docstring for the contract."""

    __slots__ = ("_state", "_spare_normal")

    def __init__(self, seed: int):
        self._state = seed & MASK64
        self._spare_normal: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + GAMMA) & MASK64
        z = ((self._state ^ (self._state >> 30)) * _M1) & MASK64
        z = ((z ^ (z >> 27)) * _M2) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def random_open(self) -> float:
        """Uniform float in the open interval (0, 1); safe for log transforms."""
        return ((self.next_u64() >> 11) + 0.5) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) by unbiased rejection on the top range."""
        if n <= 0:
            raise ValueError("randrange bound must be positive")
        limit = MASK64 - (MASK64 + 1) % n
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % n

    def shuffle(self, xs: list) -> None:
        """In-place Fisher-Yates shuffle, descending index order."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.randrange(i + 1)
            xs[i], xs[j] = xs[j], xs[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), uniform over ordered k-tuples;
        also serves as a uniform random injection [k] -> [n].

        Rejection of repeats when k is small next to n (cheap and uniform),
        partial Fisher-Yates otherwise.
        """
        if k > n:
            raise ValueError("cannot sample more indices than available")
        if 8 * k <= n:
            seen: set[int] = set()
            out: list[int] = []
            while len(out) < k:
                x = self.randrange(n)
                if x not in seen:
                    seen.add(x)
                    out.append(x)
            return out
        pool = list(range(n))
        for i in range(k):
            j = i + self.randrange(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        """Gaussian draw via Box-Muller; the paired value is cached."""
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
        else:
            u1 = self.random_open()
            u2 = self.random()
            r = math.sqrt(-2.0 * math.log(u1))
            z = r * math.cos(2.0 * math.pi * u2)
            self._spare_normal = r * math.sin(2.0 * math.pi * u2)
        return mean + std * z

    def geometric_from_success(self, success: float) -> int:
        """Geometric draw on {1, 2, ...} with P(k) = (1-success)^(k-1) * success.

        Inversion form ceil(ln U / ln q) with q = 1 - success and U drawn
        from the open unit interval, so the support is exactly the positive
        integers.
        """
        if not 0.0 < success <= 1.0:
            raise ValueError("success probability must lie in (0, 1]")
        if success == 1.0:
            self.next_u64()  # keep stream advancement uniform
            return 1
        q = 1.0 - success
        u = self.random_open()
        return max(1, math.ceil(math.log(u) / math.log(q)))


class PoissonTable:
    """Inversion sampler for Poisson(lam) with a precomputed CDF table.

    One uniform per draw; the table is extended until the CDF is within
    1e-15 of 1, and draws beyond the table are clamped to its last entry
    (probability below 1e-15).
    """

    __slots__ = ("lam", "_cdf")

    def __init__(self, lam: float):
        if lam <= 0:
            raise ValueError("Poisson mean must be positive")
        self.lam = lam
        cdf = []
        p = math.exp(-lam)
        total = p
        cdf.append(total)
        k = 0
        while total < 1.0 - 1e-15 and k < int(lam + 40 * math.sqrt(lam) + 50):
            k += 1
            p *= lam / k
            total += p
            cdf.append(total)
        self._cdf = cdf

    def draw(self, rng: SplitMix64) -> int:
        return bisect_left(self._cdf, rng.random())

    def draw_many(self, rng: SplitMix64, count: int) -> list[int]:
        cdf = self._cdf
        rand = rng.random
        return [bisect_left(cdf, rand()) for _ in range(count)]
