"""
Per-round communication graphs and graph sequences.
"""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

import networkx as nx

from app.core.errors import GraphError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    if u == v:
        raise GraphError(f"self-loop at node {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class RoundGraph:
    """Connected undirected graph of one round. Edges are stored as (min, max)."""
    n: int
    edges: FrozenSet[Edge]
    _adjacency: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"graph needs at least one node, got n={self.n}")
        adjacency: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise GraphError(f"edge ({u}, {v}) is not a normalized edge on {self.n} nodes")
            adjacency[u].append(v)
            adjacency[v].append(u)
        object.__setattr__(self, "_adjacency", tuple(tuple(sorted(a)) for a in adjacency))
        if not nx.is_connected(self.to_networkx()):
            raise GraphError(f"round graph on {self.n} nodes is disconnected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "RoundGraph":
        """Build from raw pairs; rejects self-loops and duplicates."""
        normalized = set()
        for u, v in edges:
            edge = normalize_edge(int(u), int(v))
            if edge in normalized:
                raise GraphError(f"duplicate edge {edge}")
            normalized.add(edge)
        return cls(n, frozenset(normalized))

    @classmethod
    def path(cls, order: List[int]) -> "RoundGraph":
        """Line visiting the nodes in the given order."""
        return cls.from_edges(len(order), zip(order, order[1:]))

    @classmethod
    def clique(cls, n: int) -> "RoundGraph":
        return cls(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return normalize_edge(u, v) in self.edges

    def neighbors(self, node: int) -> Tuple[int, ...]:
        return self._adjacency[node]

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class GraphSequence:
    """Ordered rounds of one dynamic network; round r is rounds[r - 1]."""
    n: int
    rounds: Tuple[RoundGraph, ...]

    def __post_init__(self):
        for index, graph in enumerate(self.rounds, start=1):
            if graph.n != self.n:
                raise GraphError(f"round {index} has {graph.n} nodes, expected {self.n}")

    def __len__(self) -> int:
        return len(self.rounds)

    def graph(self, round_index: int) -> RoundGraph:
        if not 1 <= round_index <= len(self.rounds):
            raise GraphError(f"round {round_index} outside sequence of length {len(self.rounds)}")
        return self.rounds[round_index - 1]

    def window(self, start: int, length: int) -> "GraphSequence":
        """Rounds start .. start+length-1 as a new sequence (renumbered from 1)."""
        if start < 1 or length < 0 or start + length - 1 > len(self.rounds):
            raise GraphError(
                f"window [{start}, {start + length - 1}] exceeds sequence of length {len(self.rounds)}"
            )
        return GraphSequence(self.n, self.rounds[start - 1:start - 1 + length])


# Graph-sequence file: "n L", then L blocks "round r m" + m lines "u v"

def parse_graph_sequence(text: str) -> GraphSequence:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise GraphError("empty graph-sequence file")
    try:
        n, length = (int(part) for part in lines[0].split())
    except ValueError as e:
        raise GraphError(f"bad header {lines[0]!r}") from e

    rounds: List[RoundGraph] = []
    cursor = 1
    for expected in range(1, length + 1):
        if cursor >= len(lines):
            raise GraphError(f"missing block for round {expected}")
        parts = lines[cursor].split()
        if len(parts) != 3 or parts[0] != "round" or parts[1] != str(expected) or not parts[2].isdigit():
            raise GraphError(f"expected 'round {expected} m', got {lines[cursor]!r}")
        m = int(parts[2])
        block = lines[cursor + 1:cursor + 1 + m]
        if len(block) != m:
            raise GraphError(f"round {expected} declares {m} edges, found {len(block)}")
        try:
            edges = [tuple(int(x) for x in line.split()) for line in block]
            rounds.append(RoundGraph.from_edges(n, edges))
        except (ValueError, TypeError) as e:
            raise GraphError(f"round {expected}: {e}") from e
        cursor += 1 + m
    return GraphSequence(n, tuple(rounds))


def format_graph_sequence(sequence: GraphSequence) -> str:
    lines = [f"{sequence.n} {len(sequence)}"]
    for index, graph in enumerate(sequence.rounds, start=1):
        edges = graph.sorted_edges()
        lines.append(f"round {index} {len(edges)}")
        lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"

