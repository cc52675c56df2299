"""
Symmetric-difference forwarding for the weakly adaptive model.

Per-edge draws are keyed by (round, min endpoint, max endpoint), so the
order in which edges are processed never changes the outcome.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Tuple

from app.core.engine import Transfer
from app.core.errors import OrientationError
from app.core.graphs import Edge, RoundGraph, normalize_edge
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution, TokenSet
from app.protocols.analysis import inter_group_edges

logger = logging.getLogger(__name__)

Orientation = Mapping[Edge, Tuple[int, int]]  # edge -> (sender, receiver)


@dataclass(frozen=True)
class RoundExchange:
    round: int
    transfers: Tuple[Transfer, ...]

    def __iter__(self) -> Iterator[Transfer]:
        return iter(self.transfers)

    def __len__(self) -> int:
        return len(self.transfers)


def _sample(candidates: TokenSet, streams: SeedStreams, label: str, round_index: int, edge: Edge) -> int:
    return candidates.nth(streams.index(label, len(candidates), round_index, *edge))


def symdiff_exchanges(
        dist: TokenDistribution,
        graph: RoundGraph,
        streams: SeedStreams,
        round_index: int,
) -> RoundExchange:
    """Per edge, one uniform element of the symmetric difference, sent by its holder."""
    if graph.n != dist.n:
        raise ValueError(f"graph has {graph.n} nodes, distribution {dist.n}")
    transfers: List[Transfer] = []
    for u, v in graph.sorted_edges():
        diff = dist[u] ^ dist[v]
        if not diff:
            continue
        token = _sample(diff, streams, "symdiff", round_index, (u, v))
        sender, receiver = (u, v) if token in dist[u] else (v, u)
        transfers.append(Transfer(round_index, sender, receiver, token))
    return RoundExchange(round_index, tuple(transfers))


def symdiff_oriented_exchanges(
        dist: TokenDistribution,
        graph: RoundGraph,
        orientation: Orientation,
        streams: SeedStreams,
        round_index: int,
) -> RoundExchange:
    """Per oriented edge u->v, one uniform element of holdings(u) minus holdings(v)."""
    transfers: List[Transfer] = []
    for edge in sorted(orientation):
        sender, receiver = orientation[edge]
        if normalize_edge(sender, receiver) != edge or not graph.has_edge(sender, receiver):
            raise OrientationError(f"orientation {sender}->{receiver} does not match edge {edge}")
        candidates = dist[sender] - dist[receiver]
        if not candidates:
            raise OrientationError(
                f"illegal orientation {sender}->{receiver}: sender holdings are a subset"
            )
        token = _sample(candidates, streams, "symdiff-oriented", round_index, edge)
        transfers.append(Transfer(round_index, sender, receiver, token))
    return RoundExchange(round_index, tuple(transfers))


def random_orientation(
        dist: TokenDistribution,
        graph: RoundGraph,
        streams: SeedStreams,
        round_index: int,
) -> Dict[Edge, Tuple[int, int]]:
    """A legal orientation of every inter-group edge, uniform among legal directions."""
    orientation: Dict[Edge, Tuple[int, int]] = {}
    for u, v in inter_group_edges(dist, graph):
        legal = [(a, b) for a, b in ((u, v), (v, u)) if not dist[a] <= dist[b]]
        orientation[(u, v)] = legal[streams.index("orientation", len(legal), round_index, u, v)]
    return orientation


def det_symdiff_exchanges(
        dist: TokenDistribution,
        graph: RoundGraph,
        round_index: int = 1,
) -> RoundExchange:
    """Per edge, the minimum-id element of the symmetric difference."""
    transfers: List[Transfer] = []
    for u, v in graph.sorted_edges():
        token = (dist[u] ^ dist[v]).min_token()
        if token is None:
            continue
        sender, receiver = (u, v) if token in dist[u] else (v, u)
        transfers.append(Transfer(round_index, sender, receiver, token))
    return RoundExchange(round_index, tuple(transfers))
