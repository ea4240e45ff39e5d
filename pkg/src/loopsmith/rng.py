"""Portable deterministic RNG: SplitMix64 core with labeled substreams.

Corpus generation must reproduce bit-for-bit across platforms and Python
versions, so we avoid random.Random and derive child streams by hashing
(seed, label); adding a draw to one stream never perturbs another.
"""

from __future__ import annotations

import hashlib

_MASK = (1 << 64) - 1


def _splitmix(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def derive_seed(seed: int, label) -> int:
    digest = hashlib.blake2b(
        f"{seed & _MASK}:{label}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


class Rng:
    def __init__(self, seed: int):
        self.seed = seed & _MASK
        self._state = self.seed

    def split(self, label) -> "Rng":
        """Independent child stream; label identifies the purpose."""
        return Rng(derive_seed(self.seed, label))

    def next_u64(self) -> int:
        self._state, out = _splitmix(self._state)
        return out

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        # rejection sampling over the smallest covering power of two
        bits = max(1, span - 1).bit_length()
        while True:
            v = self.next_u64() >> (64 - bits) if bits < 64 else self.next_u64()
            if v < span:
                return lo + v

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def percent(self, p: int) -> bool:
        """True with probability p/100."""
        return self.randint(0, 99) < p

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def sample(self, seq, k: int) -> list:
        if k > len(seq):
            raise ValueError("sample larger than population")
        pool = list(seq)
        self.shuffle(pool)
        return pool[:k]
