"""Shared adversary types."""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import FrozenSet, Iterator, Optional, Sequence, Tuple

from app.core.errors import ContractError
from app.core.graphs import RoundGraph
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution


@dataclass(frozen=True)
class BroadcastChoice:
    """Token each node broadcasts this round; None = the node stays silent."""
    tokens: Tuple[Optional[int], ...]

    @classmethod
    def of(cls, tokens: Sequence[Optional[int]]) -> "BroadcastChoice":
        return cls(tuple(None if t is None else int(t) for t in tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, node: int) -> Optional[int]:
        return self.tokens[node]

    def __iter__(self) -> Iterator[Optional[int]]:
        return iter(self.tokens)

    def check_against(self, dist: TokenDistribution) -> None:
        if len(self.tokens) != dist.n:
            raise ContractError(f"{len(self.tokens)} choices for {dist.n} nodes")
        for node, token in enumerate(self.tokens):
            if token is not None and not dist.holds(node, token):
                raise ContractError(f"node {node} chose token {token} it does not hold")


@dataclass(frozen=True)
class HalfEmptyConfig:
    nodes: Tuple[int, ...]
    tokens: Tuple[int, ...]
    dropped: int = 0  # components with no broadcasting member

    def __post_init__(self):
        if len(self.nodes) != len(self.tokens):
            raise ContractError("nodes and tokens must have the same length")
        if len(set(self.nodes)) != len(self.nodes):
            raise ContractError(f"node ids repeat in {self.nodes}")
        if len(set(self.tokens)) != len(self.tokens):
            raise ContractError(f"token ids repeat in {self.tokens}")

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class AdversaryRoundReport:
    graph: RoundGraph
    components: Tuple[FrozenSet[int], ...]
    representatives: Tuple[int, ...]  # in line order
    non_free_edge_count: int

    def __post_init__(self):
        if self.non_free_edge_count != len(self.components) - 1:
            raise ContractError(
                f"{self.non_free_edge_count} non-free edges for {len(self.components)} components"
            )


class Adversary(ABC):
    """Produces the graph of each round."""

    name: str = "adversary"
    strongly_adaptive: bool = False

    @abstractmethod
    def graph_for_round(
            self,
            round_index: int,
            dist: TokenDistribution,
            streams: SeedStreams,
            choices: Optional[BroadcastChoice] = None,
    ) -> RoundGraph:
        ...
