"""
Time-expanded (evolution) graphs of a graph sequence.

Vertex (node, level) has id level * n + node. Multiport graphs have l + 1
levels; broadcast graphs have 2l + 1, with odd levels holding the copy a
node selects its single broadcast token from.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from app.core.errors import GraphError
from app.core.graphs import GraphSequence
from app.core.schedule import ScheduleMode

logger = logging.getLogger(__name__)


class ArcKind(str, Enum):
    BUFFER = "buffer"
    TRANSMIT = "transmit"
    BROADCAST = "broadcast"
    SELECTION = "selection"


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: int
    kind: ArcKind
    round: int  # 1-based round of the sequence this arc belongs to


@dataclass
class EvolutionGraph:
    mode: ScheduleMode
    n: int
    rounds: int
    levels: int
    infinity: int
    arcs: List[Arc]

    @property
    def vertex_count(self) -> int:
        return self.n * self.levels

    def vertex(self, node: int, level: int) -> int:
        if not (0 <= node < self.n and 0 <= level < self.levels):
            raise IndexError(f"vertex ({node}, {level}) outside evolution graph")
        return level * self.n + node

    def node_of(self, vertex: int) -> Tuple[int, int]:
        """(node, level) of a vertex id."""
        return vertex % self.n, vertex // self.n

    @property
    def last_level(self) -> int:
        return self.levels - 1

    def arc_counts(self) -> Dict[ArcKind, int]:
        counts = Counter(arc.kind for arc in self.arcs)
        return {kind: counts.get(kind, 0) for kind in ArcKind}


def build_evolution(
        graphs: GraphSequence,
        l: int,  # noqa: E741
        mode: ScheduleMode,
        token_count: int = 1,
        infinity: Optional[int] = None,
) -> EvolutionGraph:
    """Leveled graph over the first l rounds of graphs.

    Buffer arcs get capacity n * token_count + 1 unless infinity is given.
    """
    if l > len(graphs):
        raise GraphError(f"evolution over {l} rounds, sequence has {len(graphs)}")
    n = graphs.n
    cap_inf = infinity if infinity is not None else n * token_count + 1
    arcs: List[Arc] = []

    if mode == ScheduleMode.MULTIPORT:
        levels = l + 1
        for i in range(1, l + 1):
            prev, cur = (i - 1) * n, i * n
            for v in range(n):
                arcs.append(Arc(prev + v, cur + v, cap_inf, ArcKind.BUFFER, i))
            for u, v in graphs.graph(i).sorted_edges():
                arcs.append(Arc(prev + u, cur + v, 1, ArcKind.TRANSMIT, i))
                arcs.append(Arc(prev + v, cur + u, 1, ArcKind.TRANSMIT, i))
    else:
        levels = 2 * l + 1
        for i in range(1, l + 1):
            even_prev, odd, even = 2 * (i - 1) * n, (2 * i - 1) * n, 2 * i * n
            for v in range(n):
                arcs.append(Arc(even_prev + v, even + v, cap_inf, ArcKind.BUFFER, i))
                arcs.append(Arc(even_prev + v, odd + v, 1, ArcKind.SELECTION, i))
            for u, v in graphs.graph(i).sorted_edges():
                arcs.append(Arc(odd + u, even + v, 1, ArcKind.BROADCAST, i))
                arcs.append(Arc(odd + v, even + u, 1, ArcKind.BROADCAST, i))

    logger.debug(f"[build_evolution] {mode.value} | rounds={l} levels={levels} arcs={len(arcs)}")
    return EvolutionGraph(mode=mode, n=n, rounds=l, levels=levels, infinity=cap_inf, arcs=arcs)
