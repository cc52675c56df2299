"""
Token holdings: per-node bit vectors and the global distribution.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from app.config.constants import SpecPrefix
from app.core.errors import DistributionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class TokenSet:
    """Fixed-width set of token ids backed by a Python int (bit i = token i)."""
    width: int
    bits: int = 0

    def __post_init__(self):
        if self.width < 0:
            raise ValueError(f"width must be non-negative, got {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError(f"bits {self.bits:#x} do not fit width {self.width}")

    @classmethod
    def from_ids(cls, width: int, ids: Iterable[int]) -> "TokenSet":
        bits = 0
        for token in ids:
            if not 0 <= token < width:
                raise ValueError(f"token {token} outside [0, {width})")
            bits |= 1 << token
        return cls(width, bits)

    @classmethod
    def full(cls, width: int) -> "TokenSet":
        return cls(width, (1 << width) - 1)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "TokenSet":
        """Build from a boolean vector of length width."""
        width = int(mask.shape[0])
        packed = np.packbits(mask.astype(bool), bitorder="little").tobytes()
        return cls(width, int.from_bytes(packed, "little"))

    def __contains__(self, token: object) -> bool:
        if not isinstance(token, (int, np.integer)):
            return False
        return 0 <= token < self.width and bool((self.bits >> int(token)) & 1)

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: "TokenSet") -> None:
        if other.width != self.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")

    def __or__(self, other: "TokenSet") -> "TokenSet":
        self._check(other)
        return TokenSet(self.width, self.bits | other.bits)

    def __and__(self, other: "TokenSet") -> "TokenSet":
        self._check(other)
        return TokenSet(self.width, self.bits & other.bits)

    def __xor__(self, other: "TokenSet") -> "TokenSet":
        self._check(other)
        return TokenSet(self.width, self.bits ^ other.bits)

    def __sub__(self, other: "TokenSet") -> "TokenSet":
        self._check(other)
        return TokenSet(self.width, self.bits & ~other.bits)

    def __le__(self, other: "TokenSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    union = __or__
    symmetric_difference = __xor__
    difference = __sub__
    issubset = __le__

    def with_token(self, token: int) -> "TokenSet":
        if not 0 <= token < self.width:
            raise ValueError(f"token {token} outside [0, {self.width})")
        return TokenSet(self.width, self.bits | (1 << token))

    def missing_count(self) -> int:
        return self.width - len(self)

    def min_token(self) -> Optional[int]:
        if not self.bits:
            return None
        return (self.bits & -self.bits).bit_length() - 1

    def nth(self, index: int) -> int:
        """The index-th smallest member."""
        if not 0 <= index < len(self):
            raise IndexError(f"index {index} outside set of size {len(self)}")
        for position, token in enumerate(self):
            if position == index:
                return token
        raise AssertionError("unreachable")

    def to_mask(self) -> np.ndarray:
        nbytes = (self.width + 7) // 8
        raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.width].astype(bool)

    def __repr__(self) -> str:
        return f"TokenSet({self.width}, {{{', '.join(map(str, self))}}})"


@dataclass(frozen=True)
class TokenDistribution:
    """Holdings of every node; immutable, the engine returns new instances."""
    n: int
    k: int
    holdings: Tuple[TokenSet, ...]

    def __post_init__(self):
        if self.n < 1 or self.k < 0:
            raise DistributionError(f"invalid sizes n={self.n}, k={self.k}")
        if len(self.holdings) != self.n:
            raise DistributionError(f"expected {self.n} holdings, got {len(self.holdings)}")
        for node, held in enumerate(self.holdings):
            if held.width != self.k:
                raise DistributionError(f"node {node} has width {held.width}, expected {self.k}")

    @classmethod
    def from_sets(cls, k: int, sets: Sequence[Iterable[int]]) -> "TokenDistribution":
        return cls(len(sets), k, tuple(TokenSet.from_ids(k, ids) for ids in sets))

    def __getitem__(self, node: int) -> TokenSet:
        return self.holdings[node]

    def holds(self, node: int, token: int) -> bool:
        return token in self.holdings[node]

    def missing(self, node: int) -> int:
        return self.holdings[node].missing_count()

    def missing_total(self) -> int:
        return self.n * self.k - sum(len(held) for held in self.holdings)

    def is_complete(self) -> bool:
        full = (1 << self.k) - 1
        return all(held.bits == full for held in self.holdings)

    def holders(self, token: int) -> List[int]:
        return [node for node, held in enumerate(self.holdings) if token in held]

    def matrix(self) -> np.ndarray:
        """n x k boolean matrix, row v = holdings of v."""
        if self.k == 0:
            return np.zeros((self.n, 0), dtype=bool)
        return np.vstack([held.to_mask() for held in self.holdings])

    def replace(self, updates: Mapping[int, TokenSet]) -> "TokenDistribution":
        holdings = list(self.holdings)
        for node, held in updates.items():
            holdings[node] = held
        return TokenDistribution(self.n, self.k, tuple(holdings))


def missing_total(dist: TokenDistribution) -> int:
    """Total number of (node, token) pairs still missing."""
    return dist.missing_total()


# Init specs

@dataclass(frozen=True)
class WellMixed:
    p: float


@dataclass(frozen=True)
class Singleton:
    assignment: Optional[Tuple[int, ...]] = None  # token i -> node assignment[i]; None = i mod n


@dataclass(frozen=True)
class AllAtOne:
    node: int = 0


@dataclass(frozen=True)
class Explicit:
    holdings: Tuple[Tuple[int, ...], ...]


InitSpec = Union[WellMixed, Singleton, AllAtOne, Explicit]


def parse_init_spec(text: str) -> InitSpec:
    """Parse `well-mixed:<p>`, `singleton`, `all-at-one[:<node>]` or `file:<path>`."""
    name, _, arg = text.strip().partition(":")
    try:
        if name == SpecPrefix.WELL_MIXED:
            return WellMixed(float(arg))
        if name == SpecPrefix.SINGLETON and not arg:
            return Singleton()
        if name == SpecPrefix.ALL_AT_ONE:
            return AllAtOne(int(arg) if arg else 0)
        if name == SpecPrefix.FILE and arg:
            with open(arg, encoding="utf-8") as handle:
                dist = parse_distribution(handle.read())
            return Explicit(tuple(tuple(held) for held in dist.holdings))
    except (ValueError, OSError) as e:
        raise DistributionError(f"bad init spec {text!r}: {e}") from e
    raise DistributionError(f"unknown init spec {text!r}")


def init_distribution(spec: InitSpec, n: int, k: int, rng: np.random.Generator) -> TokenDistribution:
    """Build the initial holdings described by spec."""
    if n < 1 or k < 1:
        raise DistributionError(f"need n >= 1 and k >= 1, got n={n}, k={k}")

    if isinstance(spec, WellMixed):
        if not 0 < spec.p <= 1:
            raise DistributionError(f"p must be in (0, 1], got {spec.p}")
        draws = rng.random((n, k)) < spec.p
        return TokenDistribution(n, k, tuple(TokenSet.from_mask(row) for row in draws))

    if isinstance(spec, Singleton):
        assignment = spec.assignment or tuple(token % n for token in range(k))
        if len(assignment) != k:
            raise DistributionError(f"assignment covers {len(assignment)} tokens, expected {k}")
        sets: List[List[int]] = [[] for _ in range(n)]
        for token, node in enumerate(assignment):
            if not 0 <= node < n:
                raise DistributionError(f"token {token} assigned to node {node} outside [0, {n})")
            sets[node].append(token)
        return TokenDistribution.from_sets(k, sets)

    if isinstance(spec, AllAtOne):
        if not 0 <= spec.node < n:
            raise DistributionError(f"node {spec.node} outside [0, {n})")
        sets = [range(k) if node == spec.node else () for node in range(n)]
        return TokenDistribution.from_sets(k, sets)

    if isinstance(spec, Explicit):
        if len(spec.holdings) != n:
            raise DistributionError(f"explicit holdings list {len(spec.holdings)} nodes, expected {n}")
        try:
            return TokenDistribution.from_sets(k, spec.holdings)
        except ValueError as e:
            raise DistributionError(str(e)) from e

    raise DistributionError(f"unsupported init spec {spec!r}")


# Distribution file: "n k" then n lines of token ids

def parse_distribution(text: str) -> TokenDistribution:
    lines = text.splitlines()
    if not lines:
        raise DistributionError("empty distribution file")
    try:
        n, k = (int(part) for part in lines[0].split())
        body = lines[1:]
        while len(body) > n and not body[-1].strip():
            body.pop()
        if len(body) != n:
            raise DistributionError(f"expected {n} node lines, found {len(body)}")
        sets = [[int(token) for token in line.split()] for line in body]
        return TokenDistribution.from_sets(k, sets)
    except ValueError as e:
        raise DistributionError(f"malformed distribution file: {e}") from e


def format_distribution(dist: TokenDistribution) -> str:
    lines = [f"{dist.n} {dist.k}"]
    lines.extend(" ".join(map(str, held)) for held in dist.holdings)
    return "\n".join(lines) + "\n"
