"""Sampling parameters and the two-party transcript."""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple


@dataclass(frozen=True)
class SamplingParams:
    k: int
    eps: float
    d: int
    alpha: float
    subprotocol_error: float

    @classmethod
    def from_eps(cls, k: int, eps: float) -> "SamplingParams":
        """d = ceil(k log2(3k/eps)), alpha = eps / (3 k d), subprotocol error eps / 3."""
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        if not 0 < eps < 1:
            raise ValueError(f"eps must be in (0, 1), got {eps}")
        d = math.ceil(k * math.log2(3 * k / eps))
        return cls(k=k, eps=eps, d=d, alpha=eps / (3 * k * d), subprotocol_error=eps / 3)


class Direction(str, Enum):
    ALICE_TO_BOB = "alice->bob"
    BOB_TO_ALICE = "bob->alice"


@dataclass
class Transcript:
    messages: List[Tuple[Direction, int, str]] = field(default_factory=list)

    def send(self, direction: Direction, bits: int, label: str = "") -> None:
        if bits < 0:
            raise ValueError(f"negative message length {bits}")
        self.messages.append((direction, bits, label))

    def _total(self, direction: Direction) -> int:
        return sum(bits for d, bits, _ in self.messages if d == direction)

    @property
    def bits_alice_to_bob(self) -> int:
        return self._total(Direction.ALICE_TO_BOB)

    @property
    def bits_bob_to_alice(self) -> int:
        return self._total(Direction.BOB_TO_ALICE)

    @property
    def total_bits(self) -> int:
        return sum(bits for _, bits, _ in self.messages)

    def bits_labelled(self, label: str) -> int:
        return sum(bits for _, bits, lab in self.messages if lab == label)

    @property
    def seed_bits(self) -> int:
        return self.bits_labelled("seed")

    @property
    def protocol_bits(self) -> int:
        """Everything except the generator seed."""
        return self.total_bits - self.seed_bits
