"""
Round instrumentation: groups, inter-group edges and round colors.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Tuple

from app.core.graphs import Edge, RoundGraph
from app.core.tokens import TokenDistribution


@dataclass(frozen=True)
class GroupPartition:
    groups: Tuple[FrozenSet[int], ...]  # ordered by lowest member
    index: Tuple[int, ...]  # node -> group position

    def __len__(self) -> int:
        return len(self.groups)


class RoundColor(str, Enum):
    RED = "red"
    GREEN = "green"
    BLUE = "blue"
    BLACK = "black"


def groups(dist: TokenDistribution) -> GroupPartition:
    """Partition nodes by identical holdings."""
    positions: Dict[int, int] = {}
    members: List[List[int]] = []
    index: List[int] = []
    for node, held in enumerate(dist.holdings):
        position = positions.setdefault(held.bits, len(members))
        if position == len(members):
            members.append([])
        members[position].append(node)
        index.append(position)
    return GroupPartition(tuple(frozenset(m) for m in members), tuple(index))


def inter_group_edges(dist: TokenDistribution, graph: RoundGraph) -> List[Edge]:
    """Edges whose endpoints hold different token sets."""
    return [(u, v) for u, v in graph.sorted_edges() if dist[u].bits != dist[v].bits]


def classify_round(
        before: TokenDistribution,
        after: TokenDistribution,
        fraction: float,
) -> RoundColor:
    """Color of one round from consecutive engine states."""
    if not 0 < fraction < 1:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    threshold = math.log2(before.n) if before.n > 1 else 0.0
    any_progress = False
    green = False
    for node in range(before.n):
        missing = before.missing(node)
        progress = missing - after.missing(node)
        if progress < 1:
            continue
        any_progress = True
        if missing < threshold:
            return RoundColor.RED
        if progress >= fraction * missing:
            green = True
    if green:
        return RoundColor.GREEN
    return RoundColor.BLUE if any_progress else RoundColor.BLACK


def union_missing(dist: TokenDistribution, nodes: Iterable[int]) -> int:
    """Tokens held by none of the given nodes."""
    bits = 0
    for node in nodes:
        bits |= dist[node].bits
    return dist.k - bits.bit_count()
