"""
Integral maximum flow (Dinic) and unit path decomposition.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from app.offline.evolution import EvolutionGraph

logger = logging.getLogger(__name__)


class FlowNetwork:
    """Residual network; edge e and e ^ 1 are a forward/backward pair."""

    def __init__(self, vertex_count: int):
        self.size = vertex_count
        self.adj: List[List[int]] = [[] for _ in range(vertex_count)]
        self.to: List[int] = []
        self.cap: List[int] = []
        self.capacity: List[int] = []

    def add_vertex(self) -> int:
        self.adj.append([])
        self.size += 1
        return self.size - 1

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        if capacity < 0:
            raise ValueError(f"negative capacity on ({u}, {v})")
        index = len(self.to)
        self.to += [v, u]
        self.cap += [capacity, 0]
        self.capacity += [capacity, 0]
        self.adj[u].append(index)
        self.adj[v].append(index + 1)
        return index

    def flow(self, edge: int) -> int:
        return self.capacity[edge] - self.cap[edge]

    def _levels(self, s: int, t: int) -> Optional[List[int]]:
        level = [-1] * self.size
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _blocking_flow(self, s: int, t: int, level: List[int]) -> int:
        pointer = [0] * self.size
        total = 0
        stack: List[int] = []  # edges of the current partial path
        u = s
        while True:
            if u == t:
                pushed = min(self.cap[e] for e in stack)
                for e in stack:
                    self.cap[e] -= pushed
                    self.cap[e ^ 1] += pushed
                total += pushed
                stack.clear()
                u = s
                continue
            edges = self.adj[u]
            advanced = False
            while pointer[u] < len(edges):
                e = edges[pointer[u]]
                v = self.to[e]
                if self.cap[e] > 0 and level[v] == level[u] + 1:
                    stack.append(e)
                    u = v
                    advanced = True
                    break
                pointer[u] += 1
            if advanced:
                continue
            if u == s:
                return total
            level[u] = -1  # dead end
            e = stack.pop()
            u = self.to[e ^ 1]
            pointer[u] += 1

    def max_flow(self, s: int, t: int) -> int:
        """Value of a maximum s-t flow; the residual network keeps the flow."""
        if s == t:
            raise ValueError("source and sink must differ")
        value = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return value
            value += self._blocking_flow(s, t, level)

    def decompose(self, s: int, t: int) -> List[List[int]]:
        """Split the current flow into unit s-t paths (lists of edge ids); cycles are dropped."""
        remaining = [self.flow(e) if e % 2 == 0 else 0 for e in range(len(self.to))]
        pointer = [0] * self.size
        paths: List[List[int]] = []
        while True:
            path: List[int] = []
            position: Dict[int, int] = {s: 0}
            u = s
            while u != t:
                edges = self.adj[u]
                while pointer[u] < len(edges) and remaining[edges[pointer[u]]] == 0:
                    pointer[u] += 1
                if pointer[u] == len(edges):
                    if u == s:
                        return paths
                    raise AssertionError(f"flow conservation broken at vertex {u}")
                e = edges[pointer[u]]
                v = self.to[e]
                path.append(e)
                if v in position:
                    cut = position[v]
                    for cycle_edge in path[cut:]:
                        remaining[cycle_edge] -= 1
                    del path[cut:]
                    position = {x: p for x, p in position.items() if p <= cut}
                else:
                    position[v] = len(path)
                u = v
            for e in path:
                remaining[e] -= 1
            paths.append(path)


@dataclass(frozen=True)
class FlowPath:
    arcs: Tuple[int, ...]  # indices into EvolutionGraph.arcs
    origin: int  # node whose level-0 copy starts the path
    sink: int  # node whose last-level copy ends the path
    token: Optional[int] = None


@dataclass
class FlowResult:
    value: int
    arc_flows: List[int]  # per EvolutionGraph arc
    paths: List[FlowPath]


def max_flow(
        g: EvolutionGraph,
        sources: Mapping[int, int],
        sinks: Mapping[int, int],
) -> FlowResult:
    """Max flow from a super-source feeding level-0 copies to a super-sink
    fed by last-level copies, with capacities given per node."""
    network = FlowNetwork(g.vertex_count + 2)
    source, sink = g.vertex_count, g.vertex_count + 1
    arc_of_edge: Dict[int, int] = {}
    for index, arc in enumerate(g.arcs):
        arc_of_edge[network.add_edge(arc.tail, arc.head, arc.capacity)] = index
    for node, capacity in sorted(sources.items()):
        network.add_edge(source, g.vertex(node, 0), capacity)
    for node, capacity in sorted(sinks.items()):
        network.add_edge(g.vertex(node, g.last_level), sink, capacity)

    value = network.max_flow(source, sink)
    paths = []
    for edges in network.decompose(source, sink):
        origin, _ = g.node_of(network.to[edges[0]])
        end, _ = g.node_of(network.to[edges[-1] ^ 1])
        paths.append(FlowPath(tuple(arc_of_edge[e] for e in edges if e in arc_of_edge), origin, end))

    arc_flows = [0] * len(g.arcs)
    for edge, index in arc_of_edge.items():
        arc_flows[index] = network.flow(edge)
    logger.debug(f"[max_flow] {g.mode.value} | value={value} paths={len(paths)}")
    return FlowResult(value=value, arc_flows=arc_flows, paths=paths)
