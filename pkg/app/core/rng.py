"""
Deterministic randomness derived from a single root seed.

Every consumer (adversary, protocol edge, init, sampler) gets its own stream
keyed by a label and integer keys, so adding a consumer never shifts the
draws of another one.
"""
import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _label_key(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode(), digest_size=8).digest(), "little")


class SeedStreams:
    """Factory of per-consumer random streams for one run."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = seed
        self._key = hashlib.blake2b(str(seed).encode(), digest_size=16).digest()

    def stream(self, label: str, *keys: int) -> np.random.Generator:
        """Numpy generator for (label, *keys)."""
        entropy = [self.seed, _label_key(label), *(int(key) for key in keys)]
        return np.random.default_rng(np.random.SeedSequence(entropy))

    def index(self, label: str, size: int, *keys: int) -> int:
        """Exactly uniform integer in [0, size) keyed by (label, *keys).

        Cheaper than building a generator; used for per-edge draws.
        """
        if size <= 0:
            raise ValueError(f"size must be positive, got {size}")
        if size == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % size)
        counter = 0
        while True:
            value = self._word(label, counter, *keys)
            if value < limit:
                return value % size
            counter += 1

    def child_seed(self, label: str, *keys: int) -> int:
        """A fresh non-negative seed for a sub-run."""
        return self._word(label, 0, *keys) & ((1 << 63) - 1)

    def _word(self, label: str, counter: int, *keys: int) -> int:
        digest = hashlib.blake2b(digest_size=8, key=self._key)
        digest.update(label.encode())
        for key in (*keys, counter):
            digest.update(int(key).to_bytes(8, "little", signed=False))
            digest.update(b"|")
        return int.from_bytes(digest.digest(), "little") & _MASK64
