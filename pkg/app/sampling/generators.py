"""
Sequence generators expanding a shared seed into d values in [0, k).

The true-random generator ships the whole sequence as its seed. The keyed
PRF stand-in expands a short seed with keyed BLAKE2b in counter mode; its
seed length is a configured accounting parameter.
"""
import hashlib
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from app.config.constants import Fingerprint, SpecPrefix
from app.core.errors import ConfigError


@dataclass(frozen=True)
class SequenceSample:
    entries: Tuple[int, ...]
    k: int

    def __post_init__(self):
        for value in self.entries:
            if not 0 <= value < self.k:
                raise ValueError(f"entry {value} outside [0, {self.k})")


class SequenceGenerator(ABC):
    name: str = "generator"

    @abstractmethod
    def seed_bits(self, k: int, d: int, alpha: float) -> int:
        ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, k: int, d: int, alpha: float) -> SequenceSample:
        ...


class TrueRandomGenerator(SequenceGenerator):
    name = SpecPrefix.TRUE_RANDOM

    def seed_bits(self, k, d, alpha):
        return d * math.ceil(math.log2(k)) if k > 1 else 0

    def sample(self, rng, k, d, alpha):
        return SequenceSample(tuple(int(x) for x in rng.integers(0, k, size=d)), k)


class KeyedPrfGenerator(SequenceGenerator):
    name = SpecPrefix.PRF

    def __init__(self, bits: Optional[int] = None):
        if bits is not None and bits < 1:
            raise ConfigError(f"seed length must be positive, got {bits}")
        self.bits = bits

    def seed_bits(self, k, d, alpha):
        if self.bits is not None:
            return self.bits
        return math.ceil(math.log2(k * d / alpha)) * Fingerprint.PRF_SEED_MULTIPLIER

    def sample(self, rng, k, d, alpha):
        bits = self.seed_bits(k, d, alpha)
        seed = int.from_bytes(rng.bytes((bits + 7) // 8), "little") & ((1 << bits) - 1)
        return SequenceSample(tuple(expand_seed(seed, bits, k, d)), k)


def expand_seed(seed: int, bits: int, k: int, d: int) -> List[int]:
    """Counter-mode keyed BLAKE2b, rejection-sampled into [0, k)."""
    key = hashlib.blake2b(seed.to_bytes((bits + 7) // 8 or 1, "little"), digest_size=32).digest()
    limit = (1 << 64) - ((1 << 64) % k)
    values: List[int] = []
    counter = 0
    while len(values) < d:
        word = int.from_bytes(
            hashlib.blake2b(counter.to_bytes(8, "little"), digest_size=8, key=key).digest(), "little"
        )
        counter += 1
        if word < limit:
            values.append(word % k)
    return values


def parse_generator_spec(text: str) -> SequenceGenerator:
    """`true-random`, `prf` or `prf:<seed bits>`."""
    name, _, arg = text.strip().partition(":")
    if name == SpecPrefix.TRUE_RANDOM and not arg:
        return TrueRandomGenerator()
    if name == SpecPrefix.PRF:
        try:
            return KeyedPrfGenerator(int(arg) if arg else None)
        except ValueError as e:
            raise ConfigError(f"bad seed length in {text!r}") from e
    raise ConfigError(f"unknown sequence generator {text!r}")


def permutation_from_sequence(x: SequenceSample, k: int) -> Tuple[int, ...]:
    """Distinct values in first-appearance order, then unused values in increasing order."""
    seen = set()
    order: List[int] = []
    for value in x.entries:
        if not 0 <= value < k:
            raise ValueError(f"entry {value} outside [0, {k})")
        if value not in seen:
            seen.add(value)
            order.append(value)
    order.extend(value for value in range(k) if value not in seen)
    return tuple(order)


def first_appearance_probability(k: int, d: int, target_set_size: int) -> float:
    """P(a fixed j in D shows up in a uniform length-d sequence before the rest of D)."""
    if not 1 <= target_set_size <= k:
        raise ValueError(f"target set size must be in [1, {k}], got {target_set_size}")
    if d < 0:
        raise ValueError(f"d must be non-negative, got {d}")
    return (1.0 / target_set_size) * (1.0 - (1.0 - target_set_size / k) ** d)
