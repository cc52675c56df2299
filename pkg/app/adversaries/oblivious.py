"""
Oblivious graph families: fixed topologies, random connected graphs, files.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from app.adversaries.base import Adversary, BroadcastChoice
from app.config.constants import SpecPrefix
from app.core.errors import ConfigError, GraphError
from app.core.graphs import Edge, GraphSequence, RoundGraph, normalize_edge, parse_graph_sequence
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphFamily:
    kind: str
    edge_prob: float = 0.0
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind == SpecPrefix.RANDOM and not 0.0 <= self.edge_prob <= 1.0:
            raise ConfigError(f"edge probability must be in [0, 1], got {self.edge_prob}")


FAMILY_KINDS = (
    SpecPrefix.STATIC_PATH,
    SpecPrefix.STATIC_STAR,
    SpecPrefix.STATIC_CLIQUE,
    SpecPrefix.RANDOM,
    SpecPrefix.TREE,
    SpecPrefix.FILE,
)


def parse_family_spec(text: str) -> GraphFamily:
    """Parse `static-path`, `static-star`, `static-clique`, `random:<p>`, `tree`, `file:<path>`."""
    name, _, arg = text.strip().partition(":")
    if name == SpecPrefix.RANDOM:
        try:
            return GraphFamily(name, edge_prob=float(arg))
        except ValueError as e:
            raise ConfigError(f"bad edge probability in {text!r}") from e
    if name == SpecPrefix.FILE and arg:
        return GraphFamily(name, path=arg)
    if name in FAMILY_KINDS and not arg and name != SpecPrefix.FILE:
        return GraphFamily(name)
    raise ConfigError(f"unknown graph family {text!r}")


def random_spanning_tree_edges(n: int, rng: np.random.Generator) -> List[Edge]:
    """Uniform random labelled tree via a random Pruefer sequence."""
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    sequence = [int(x) for x in rng.integers(0, n, size=n - 2)]
    tree = nx.from_prufer_sequence(sequence)
    return [normalize_edge(u, v) for u, v in tree.edges()]


def random_connected_edges(n: int, edge_prob: float, rng: np.random.Generator) -> List[Edge]:
    edges = set(random_spanning_tree_edges(n, rng))
    if edge_prob > 0 and n > 1:
        upper = np.triu(rng.random((n, n)) < edge_prob, 1)
        edges.update((int(u), int(v)) for u, v in np.argwhere(upper))
    return sorted(edges)


def oblivious_graph(family: GraphFamily, n: int, rng: np.random.Generator) -> RoundGraph:
    """One round of a non-file family."""
    if family.kind == SpecPrefix.STATIC_PATH:
        return RoundGraph.path(list(range(n)))
    if family.kind == SpecPrefix.STATIC_STAR:
        return RoundGraph.from_edges(n, [(0, v) for v in range(1, n)])
    if family.kind == SpecPrefix.STATIC_CLIQUE:
        return RoundGraph.clique(n)
    if family.kind == SpecPrefix.RANDOM:
        return RoundGraph(n, frozenset(random_connected_edges(n, family.edge_prob, rng)))
    if family.kind == SpecPrefix.TREE:
        return RoundGraph(n, frozenset(random_spanning_tree_edges(n, rng)))
    raise ConfigError(f"family {family.kind!r} has no per-round generator")


def load_sequence_file(path: str) -> GraphSequence:
    try:
        return parse_graph_sequence(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise GraphError(f"cannot read graph-sequence file {path}: {e}") from e


def _cycled(rounds: Tuple[RoundGraph, ...], length: int) -> Tuple[RoundGraph, ...]:
    return tuple(rounds[i % len(rounds)] for i in range(length))


def oblivious_sequence(
        family: GraphFamily,
        n: int,
        length: int,
        rng: np.random.Generator,
) -> GraphSequence:
    """A sequence of the requested length; file sequences repeat cyclically when short."""
    if family.kind == SpecPrefix.FILE:
        loaded = load_sequence_file(family.path)
        if loaded.n != n:
            raise GraphError(f"file {family.path} has n={loaded.n}, expected {n}")
        if not len(loaded):
            raise GraphError(f"file {family.path} has no rounds")
        return GraphSequence(n, _cycled(loaded.rounds, length))

    if family.kind in (SpecPrefix.STATIC_PATH, SpecPrefix.STATIC_STAR, SpecPrefix.STATIC_CLIQUE):
        graph = oblivious_graph(family, n, rng)
        return GraphSequence(n, (graph,) * length)
    return GraphSequence(n, tuple(oblivious_graph(family, n, rng) for _ in range(length)))


class ObliviousAdversary(Adversary):
    """Draws each round independently of the run state."""

    def __init__(self, family: GraphFamily):
        self.family = family
        self.name = family.kind
        self._static: Optional[RoundGraph] = None
        self._file: Optional[GraphSequence] = None

    def graph_for_round(
            self,
            round_index: int,
            dist: TokenDistribution,
            streams: SeedStreams,
            choices: Optional[BroadcastChoice] = None,
    ) -> RoundGraph:
        if self.family.kind == SpecPrefix.FILE:
            if self._file is None:
                self._file = load_sequence_file(self.family.path)
                if self._file.n != dist.n or not len(self._file):
                    raise GraphError(f"file {self.family.path} does not fit n={dist.n}")
            return self._file.rounds[(round_index - 1) % len(self._file)]
        if self.family.kind in (SpecPrefix.RANDOM, SpecPrefix.TREE):
            return oblivious_graph(self.family, dist.n, streams.stream("adversary", round_index))
        if self._static is None:
            self._static = oblivious_graph(self.family, dist.n, streams.stream("adversary"))
        return self._static
