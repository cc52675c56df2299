"""Tests for forwarding protocols and round instrumentation."""
from collections import Counter

import numpy as np
import pytest

from app.adversaries.base import BroadcastChoice
from app.core.engine import apply_exchanges
from app.core.errors import ConfigError, OrientationError
from app.core.graphs import RoundGraph
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution, init_distribution, parse_init_spec
from app.protocols import (
    BroadcastPolicy,
    RoundColor,
    broadcast_exchanges,
    choose_broadcasts,
    classify_round,
    det_symdiff_exchanges,
    groups,
    inter_group_edges,
    parse_protocol_spec,
    random_orientation,
    symdiff_exchanges,
    symdiff_oriented_exchanges,
    union_missing,
)


@pytest.fixture
def mixed():
    """Four nodes on a line with overlapping holdings."""
    dist = TokenDistribution.from_sets(4, [[0, 1], [1, 2], [1, 2], [3]])
    return dist, RoundGraph.path([0, 1, 2, 3])


class TestSymDiff:
    """Tests for randomized symmetric-difference forwarding."""

    @pytest.mark.parametrize("seed", range(6))
    def test_one_legal_transfer_per_differing_edge(self, mixed, seed):
        """Test that each edge with a nonempty difference carries one legal token."""
        dist, graph = mixed
        exchange = symdiff_exchanges(dist, graph, SeedStreams(seed), 1)

        assert {(min(t.sender, t.receiver), max(t.sender, t.receiver)) for t in exchange} == {(0, 1), (2, 3)}
        for transfer in exchange:
            assert dist.holds(transfer.sender, transfer.token)
            assert not dist.holds(transfer.receiver, transfer.token)
        _, progress = apply_exchanges(dist, graph, exchange)
        assert progress == 2

    def test_draws_cover_the_difference(self, mixed):
        """Test that across rounds every token of a difference gets sampled."""
        dist, graph = mixed
        streams = SeedStreams(9)
        sampled = {
            t.token
            for r in range(1, 60)
            for t in symdiff_exchanges(dist, graph, streams, r)
            if {t.sender, t.receiver} == {0, 1}
        }
        assert sampled == {0, 2}

    def test_draws_do_not_depend_on_other_edges(self):
        """Test that an edge's draw ignores the rest of the graph."""
        dist = TokenDistribution.from_sets(3, [[0, 1, 2], [], [0]])
        streams = SeedStreams(5)
        line = symdiff_exchanges(dist, RoundGraph.path([0, 1, 2]), streams, 3)
        star = symdiff_exchanges(dist, RoundGraph.from_edges(3, [(0, 1), (0, 2)]), streams, 3)
        pick = [t.token for t in line if t.receiver == 1 and t.sender == 0]
        assert pick == [t.token for t in star if t.receiver == 1]

    def test_graph_size_mismatch(self, mixed):
        """Test that a graph on another node count raises."""
        dist, _ = mixed
        with pytest.raises(ValueError):
            symdiff_exchanges(dist, RoundGraph.clique(3), SeedStreams(0), 1)

    @pytest.mark.parametrize("held,expected", [
        ([[0], [2]], {0: 1 / 2, 2: 1 / 2}),
        ([[0, 1], [3]], {0: 1 / 3, 1: 1 / 3, 3: 1 / 3}),
    ])
    def test_marginals_are_uniform(self, held, expected):
        """Test that each token of the difference is drawn with frequency 1/|D| within 0.01."""
        dist = TokenDistribution.from_sets(4, held)
        graph = RoundGraph.path([0, 1])
        streams = SeedStreams(31)
        rounds = 40_000
        counts = Counter(
            t.token for r in range(1, rounds + 1) for t in symdiff_exchanges(dist, graph, streams, r)
        )
        assert set(counts) == set(expected)
        for token, share in expected.items():
            assert counts[token] / rounds == pytest.approx(share, abs=0.01)


class TestOrientedSymDiff:
    """Tests for the oriented variant."""

    def test_random_orientation_is_legal(self, mixed):
        """Test that only inter-group edges are oriented, away from subset holders."""
        dist, graph = mixed
        orientation = random_orientation(dist, graph, SeedStreams(2), 1)
        assert set(orientation) == {(0, 1), (2, 3)}
        for sender, receiver in orientation.values():
            assert not dist[sender] <= dist[receiver]

    def test_subset_edge_has_one_direction(self):
        """Test that a strict subset forces the direction."""
        dist = TokenDistribution.from_sets(2, [[0], [0, 1]])
        graph = RoundGraph.path([0, 1])
        for r in range(1, 20):
            assert random_orientation(dist, graph, SeedStreams(r), r) == {(0, 1): (1, 0)}

    def test_oriented_exchanges(self, mixed):
        """Test one transfer per oriented edge from the set difference."""
        dist, graph = mixed
        streams = SeedStreams(4)
        orientation = random_orientation(dist, graph, streams, 1)
        exchange = symdiff_oriented_exchanges(dist, graph, orientation, streams, 1)
        assert len(exchange) == 2
        for transfer in exchange:
            assert orientation[(min(transfer.sender, transfer.receiver), max(transfer.sender, transfer.receiver))] \
                == (transfer.sender, transfer.receiver)
            assert transfer.token in dist[transfer.sender] - dist[transfer.receiver]

    def test_illegal_orientation(self):
        """Test that orienting away from a subset holder raises."""
        dist = TokenDistribution.from_sets(2, [[0], [0, 1]])
        graph = RoundGraph.path([0, 1])
        with pytest.raises(OrientationError):
            symdiff_oriented_exchanges(dist, graph, {(0, 1): (0, 1)}, SeedStreams(0), 1)

    def test_orientation_off_graph(self):
        """Test that orienting a non-edge raises."""
        dist = TokenDistribution.from_sets(2, [[0], [1], []])
        graph = RoundGraph.path([0, 1, 2])
        with pytest.raises(OrientationError):
            symdiff_oriented_exchanges(dist, graph, {(0, 2): (0, 2)}, SeedStreams(0), 1)


    def test_oriented_marginals_are_uniform(self):
        """Test that an oriented edge draws uniformly from sender minus receiver."""
        dist = TokenDistribution.from_sets(4, [[0, 1, 3], [1, 2]])
        graph = RoundGraph.path([0, 1])
        streams = SeedStreams(32)
        rounds = 40_000
        forward = Counter(
            t.token for r in range(1, rounds + 1)
            for t in symdiff_oriented_exchanges(dist, graph, {(0, 1): (0, 1)}, streams, r)
        )
        assert set(forward) == {0, 3}
        assert forward[0] / rounds == pytest.approx(0.5, abs=0.01)

        backward = {
            t.token for r in range(1, 200)
            for t in symdiff_oriented_exchanges(dist, graph, {(0, 1): (1, 0)}, streams, r)
        }
        assert backward == {2}


class TestDetSymDiff:
    """Tests for the deterministic variant."""

    def test_minimum_token(self, mixed):
        """Test that each edge carries the minimum id of the difference."""
        dist, graph = mixed
        exchange = det_symdiff_exchanges(dist, graph, 2)
        tokens = {(t.sender, t.receiver): t.token for t in exchange}
        assert tokens == {(0, 1): 0, (2, 3): 1}
        assert all(t.round == 2 for t in exchange)


class TestBroadcast:
    """Tests for broadcast-model choices and exchanges."""

    @pytest.fixture
    def dist(self):
        return TokenDistribution.from_sets(3, [[1, 2], [], [0, 1, 2]])

    def test_min_id(self, dist):
        """Test the min-id policy and silent empty nodes."""
        choice = choose_broadcasts(BroadcastPolicy.MIN_ID, dist, np.random.default_rng(0))
        assert choice.tokens == (1, None, 0)

    def test_round_robin(self, dist):
        """Test that round-robin cycles through held tokens."""
        picks = [choose_broadcasts(BroadcastPolicy.ROUND_ROBIN, dist, np.random.default_rng(0), r)[2]
                 for r in range(1, 5)]
        assert picks == [0, 1, 2, 0]

    def test_random_choice_is_held(self, dist):
        """Test that uniform choices are always held tokens."""
        rng = np.random.default_rng(1)
        for _ in range(20):
            choose_broadcasts(BroadcastPolicy.UNIFORM_RANDOM, dist, rng).check_against(dist)

    def test_exchanges_skip_holders(self):
        """Test that a broadcast only reaches neighbors lacking the token."""
        dist = TokenDistribution.from_sets(2, [[0], [0, 1], []])
        graph = RoundGraph.from_edges(3, [(0, 1), (1, 2)])
        transfers = broadcast_exchanges(dist, graph, BroadcastChoice.of([0, 0, None]), 4)
        assert [(t.sender, t.receiver, t.token) for t in transfers] == [(1, 2, 0)]


    def test_random_choice_is_uniform(self):
        """Test that the uniform policy picks each held token with frequency 1/4 within 0.01."""
        dist = TokenDistribution.from_sets(6, [[0, 2, 3, 5]])
        rng = np.random.default_rng(33)
        trials = 40_000
        counts = Counter(choose_broadcasts(BroadcastPolicy.UNIFORM_RANDOM, dist, rng)[0] for _ in range(trials))
        assert set(counts) == {0, 2, 3, 5}
        for token in (0, 2, 3, 5):
            assert counts[token] / trials == pytest.approx(0.25, abs=0.01)


class TestAnalysis:
    """Tests for groups, inter-group edges and round colors."""

    def test_groups(self, mixed):
        """Test grouping by identical holdings."""
        dist, graph = mixed
        partition = groups(dist)
        assert partition.groups == (frozenset({0}), frozenset({1, 2}), frozenset({3}))
        assert partition.index == (0, 1, 1, 2)
        assert inter_group_edges(dist, graph) == [(0, 1), (2, 3)]

    def test_union_missing(self, mixed):
        """Test tokens held by none of a node subset."""
        dist, _ = mixed
        assert union_missing(dist, [1, 2]) == 2
        assert union_missing(dist, range(4)) == 0

    def test_red(self):
        """Test that progress at a node missing fewer than log2 n tokens is red."""
        before = TokenDistribution.from_sets(4, [[0, 1, 2], [], [], []])
        after = TokenDistribution.from_sets(4, [[0, 1, 2, 3], [0], [], []])
        assert classify_round(before, after, 0.125) == RoundColor.RED

    def test_green(self):
        """Test that a fraction of the missing tokens in one round is green."""
        before = TokenDistribution.from_sets(4, [[], [0], [0], [0]])
        after = TokenDistribution.from_sets(4, [[0], [0], [0], [0]])
        assert classify_round(before, after, 0.25) == RoundColor.GREEN

    def test_blue(self):
        """Test that small progress at nodes missing many tokens is blue."""
        before = TokenDistribution.from_sets(8, [[0], [], [], []])
        after = TokenDistribution.from_sets(8, [[0], [0], [], []])
        assert classify_round(before, after, 0.25) == RoundColor.BLUE

    def test_black(self):
        """Test that a round without progress is black."""
        dist = TokenDistribution.from_sets(2, [[0], [1], [], []])
        assert classify_round(dist, dist, 0.5) == RoundColor.BLACK

    @pytest.mark.parametrize("fraction", [0, 1, 1.5])
    def test_bad_fraction(self, fraction):
        """Test that the fraction must lie strictly inside (0, 1)."""
        dist = TokenDistribution.from_sets(1, [[0], []])
        with pytest.raises(ValueError):
            classify_round(dist, dist, fraction)


    @pytest.mark.parametrize("seed", range(5))
    def test_connected_round_has_enough_inter_group_edges(self, seed, random_sequence):
        """Test at least r - 1 inter-group edges whenever r groups share a connected round."""
        streams = SeedStreams(seed)
        dist = init_distribution(parse_init_spec("well-mixed:0.3"), 12, 3, streams.stream("init"))
        for graph in random_sequence(12, 20, seed).rounds:
            assert len(inter_group_edges(dist, graph)) >= len(groups(dist)) - 1

    @pytest.mark.parametrize("size", [2, 4, 8, 16])
    def test_union_of_mixed_nodes_misses_few_tokens(self, size):
        """Test that l random nodes of a half-mixed start jointly miss at most (n + k) / l tokens."""
        n = k = 256
        streams = SeedStreams(40)
        dist = init_distribution(parse_init_spec("well-mixed:0.5"), n, k, streams.stream("init"))
        rng = streams.stream("subsets", size)
        samples = 200
        within = sum(
            union_missing(dist, rng.choice(n, size=size, replace=False).tolist()) <= (n + k) / size
            for _ in range(samples)
        )
        assert within >= 0.99 * samples


class TestProtocolSpec:
    """Tests for protocol spec parsing."""

    @pytest.mark.parametrize("text,name", [
        ("symdiff", "symdiff"),
        ("symdiff-oriented", "symdiff-oriented"),
        ("det-symdiff", "det-symdiff"),
        ("bcast:random", "bcast:random"),
        ("bcast:min-id", "bcast:min-id"),
        ("bcast", "bcast:random"),
    ])
    def test_known(self, text, name):
        """Test recognized protocol specs."""
        assert parse_protocol_spec(text).name == name

    @pytest.mark.parametrize("text", ["flood", "bcast:max-id", "symdiff:2"])
    def test_unknown(self, text):
        """Test unrecognized protocol specs."""
        with pytest.raises(ConfigError):
            parse_protocol_spec(text)
