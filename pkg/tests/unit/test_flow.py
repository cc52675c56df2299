"""Tests for evolution graphs and the max-flow solver."""
from itertools import combinations

import numpy as np
import pytest

from app.core.errors import GraphError
from app.core.graphs import GraphSequence, RoundGraph
from app.core.schedule import ScheduleMode
from app.offline.evolution import ArcKind, build_evolution
from app.offline.flow import FlowNetwork, max_flow


def _min_cut(n: int, edges, s: int, t: int) -> int:
    """Brute-force minimum s-t cut over every vertex subset."""
    others = [v for v in range(n) if v not in (s, t)]
    best = None
    for size in range(len(others) + 1):
        for extra in combinations(others, size):
            side = {s, *extra}
            cut = sum(c for u, v, c in edges if u in side and v not in side)
            best = cut if best is None else min(best, cut)
    return best


class TestEvolutionGraph:
    """Tests for time-expanded graph construction."""

    @pytest.fixture
    def pair(self):
        return GraphSequence(2, (RoundGraph.path([0, 1]),))

    def test_multiport_shape(self, pair):
        """Test levels, vertex ids and arc kinds of a one-round multiport graph."""
        g = build_evolution(pair, 1, ScheduleMode.MULTIPORT)
        assert g.levels == 2
        assert g.vertex_count == 4
        assert g.arc_counts() == {
            ArcKind.BUFFER: 2, ArcKind.TRANSMIT: 2, ArcKind.BROADCAST: 0, ArcKind.SELECTION: 0,
        }
        assert g.vertex(1, 1) == 3
        assert g.node_of(3) == (1, 1)
        assert all(a.capacity == 3 for a in g.arcs if a.kind == ArcKind.BUFFER)

    def test_broadcast_shape(self, pair):
        """Test the selection layer of a one-round broadcast graph."""
        g = build_evolution(pair, 1, ScheduleMode.BROADCAST, token_count=2)
        assert g.levels == 3
        assert g.arc_counts() == {
            ArcKind.BUFFER: 2, ArcKind.TRANSMIT: 0, ArcKind.BROADCAST: 2, ArcKind.SELECTION: 2,
        }
        assert g.infinity == 5
        for arc in g.arcs:
            if arc.kind == ArcKind.SELECTION:
                assert g.node_of(arc.head)[1] == 1

    def test_too_many_rounds(self, pair):
        """Test that the evolution cannot outrun the sequence."""
        with pytest.raises(GraphError):
            build_evolution(pair, 2, ScheduleMode.MULTIPORT)

    def test_vertex_bounds(self, pair):
        """Test that out-of-range vertices raise."""
        g = build_evolution(pair, 1, ScheduleMode.MULTIPORT)
        with pytest.raises(IndexError):
            g.vertex(0, 2)


class TestFlowNetwork:
    """Tests for Dinic max flow and path decomposition."""

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_min_cut(self, seed):
        """Test max flow against a brute-force minimum cut."""
        rng = np.random.default_rng(seed)
        n = 7
        edges = [(int(u), int(v), int(rng.integers(1, 5)))
                 for u in range(n) for v in range(n) if u != v and rng.random() < 0.35]
        network = FlowNetwork(n)
        for u, v, c in edges:
            network.add_edge(u, v, c)
        assert network.max_flow(0, n - 1) == _min_cut(n, edges, 0, n - 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_decomposition(self, seed):
        """Test that unit paths run from source to sink and use each edge at most its flow."""
        rng = np.random.default_rng(100 + seed)
        n = 8
        network = FlowNetwork(n)
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < 0.4:
                    network.add_edge(u, v, int(rng.integers(1, 4)))
        value = network.max_flow(0, n - 1)
        paths = network.decompose(0, n - 1)

        assert len(paths) == value
        used = {}
        for path in paths:
            assert network.to[path[0] ^ 1] == 0
            assert network.to[path[-1]] == n - 1
            for a, b in zip(path, path[1:]):
                assert network.to[a] == network.to[b ^ 1]
            for e in path:
                used[e] = used.get(e, 0) + 1
        assert all(count <= network.flow(e) for e, count in used.items())

    def test_cycle_flow_is_dropped(self):
        """Test that flow around a cycle does not appear in the paths."""
        network = FlowNetwork(4)
        network.add_edge(0, 1, 1)
        forward = network.add_edge(1, 2, 1)
        network.add_edge(2, 1, 1)
        network.add_edge(1, 3, 1)
        assert network.max_flow(0, 3) == 1
        assert network.decompose(0, 3) == [[0, 6]]
        assert network.flow(forward) == 0

    def test_no_path(self):
        """Test a disconnected sink."""
        network = FlowNetwork(3)
        network.add_edge(0, 1, 5)
        assert network.max_flow(0, 2) == 0
        assert network.decompose(0, 2) == []

    def test_rejects_bad_input(self):
        """Test negative capacities and s == t."""
        network = FlowNetwork(2)
        with pytest.raises(ValueError):
            network.add_edge(0, 1, -1)
        with pytest.raises(ValueError):
            network.max_flow(0, 0)


class TestEvolutionMaxFlow:
    """Tests for flows over evolution graphs."""

    def test_single_hop(self):
        """Test one unit across one round."""
        g = build_evolution(GraphSequence(2, (RoundGraph.path([0, 1]),)), 1, ScheduleMode.MULTIPORT)
        result = max_flow(g, {0: 1}, {1: 1})
        assert result.value == 1
        (path,) = result.paths
        assert (path.origin, path.sink) == (0, 1)
        assert [g.arcs[i].kind for i in path.arcs] == [ArcKind.TRANSMIT]

    def test_line_capacity_per_round(self):
        """Test that a line moves one token per edge direction per round."""
        line = RoundGraph.path([0, 1, 2])
        g = build_evolution(GraphSequence(3, (line,) * 3), 3, ScheduleMode.MULTIPORT, token_count=3)
        result = max_flow(g, {0: 3}, {2: 3})
        assert result.value == 2
        assert sum(result.arc_flows[i] for i, a in enumerate(g.arcs)
                   if a.kind == ArcKind.TRANSMIT and g.node_of(a.head)[0] == 2) == 2

    def test_broadcast_selection_limits_sender(self):
        """Test that a broadcast node sends one unit per round."""
        star = RoundGraph.from_edges(3, [(0, 1), (0, 2)])
        g = build_evolution(GraphSequence(3, (star,)), 1, ScheduleMode.BROADCAST, token_count=2)
        assert max_flow(g, {0: 2}, {1: 1, 2: 1}).value == 1
