"""Tests for the derandomized gather-set selection."""
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from app.core.errors import DerandomizationError, ScheduleError
from app.core.graphs import GraphSequence, RoundGraph
from app.offline.derandomize import (
    algorithm3_derandomize,
    covers,
    exhaustive_failure_sum,
    failure_sum,
    reachable_sets,
    selection_target,
)


class TestReachableSets:
    """Tests for backward flooding closures."""

    def test_static_line(self, static_sequence):
        """Test that a window of w rounds on a line reaches distance w."""
        graphs = static_sequence(RoundGraph.path([0, 1, 2, 3, 4]), 4)
        reach = reachable_sets(graphs, [(1, 2), (3, 1)])
        assert len(reach) == 10
        assert reach[0] == frozenset({0, 1, 2})
        assert reach[2] == frozenset({0, 1, 2, 3, 4})
        assert reach[5] == frozenset({0, 1})

    def test_time_respecting(self):
        """Test that the closure follows round order."""
        first = RoundGraph.path([0, 1, 2, 3])
        second = RoundGraph.path([1, 0, 3, 2])
        forward = reachable_sets(GraphSequence(4, (first, second)), [(1, 2)])
        backward = reachable_sets(GraphSequence(4, (second, first)), [(1, 2)])
        assert forward[0] == frozenset({0, 1, 2, 3})
        assert backward[0] == frozenset({0, 1, 3})

    def test_window_outside(self, static_sequence):
        """Test that a window past the sequence raises."""
        graphs = static_sequence(RoundGraph.clique(3), 2)
        with pytest.raises(ScheduleError):
            reachable_sets(graphs, [(2, 2)])


class TestFailureSum:
    """Tests for the conditional failure sum."""

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_exhaustive(self, seed):
        """Test the closed form against enumeration at n = 8."""
        rng = np.random.default_rng(seed)
        n, target = 8, 3
        reach = [frozenset(int(v) for v in np.flatnonzero(rng.random(n) < 0.3)) for _ in range(12)]
        decided = set(range(int(rng.integers(0, 5))))
        chosen = {v for v in decided if rng.random() < 0.5}
        assert failure_sum(reach, chosen, decided, n, target) == \
            exhaustive_failure_sum(reach, chosen, decided, n, target)

    def test_single_set(self):
        """Test one set of size 2 among 5 nodes with 2 draws."""
        value = failure_sum([frozenset({0, 1})], set(), set(), 5, 2)
        assert value == Fraction(comb(3, 2), comb(5, 2))

    def test_chosen_hits(self):
        """Test that a set already met by the chosen nodes contributes nothing."""
        assert failure_sum([frozenset({0, 1})], {1}, {0, 1}, 5, 2) == 0

    def test_covers(self):
        """Test the cover check."""
        reach = [frozenset({0, 1}), frozenset({2})]
        assert covers(reach, {1, 2})
        assert not covers(reach, {0, 1})


class TestSelectionTarget:
    """Tests for the gather-set size."""

    @pytest.mark.parametrize("n,k,expected", [(16, 16, 16), (8, 4, 6), (2, 1, 2), (1, 5, 1), (64, 4, 9)])
    def test_target(self, n, k, expected):
        """Test floor(2 sqrt(k log2 n)) capped at n."""
        assert selection_target(n, k) == expected


class TestAlgorithm3:
    """Tests for the greedy scan."""

    def test_line_window(self, static_sequence):
        """Test a cover of three nodes for three-round windows on a line."""
        graphs = static_sequence(RoundGraph.path(list(range(8))), 3)
        selection = algorithm3_derandomize(graphs, 8, 4, windows=[(1, 3)], target=3)

        assert len(selection.nodes) <= 3
        assert covers(reachable_sets(graphs, [(1, 3)]), selection.nodes)
        assert selection.root_sum < 1
        assert all(b <= a for a, b in zip(selection.sums, selection.sums[1:]))
        assert selection.sums[-1] == 0

    @pytest.mark.parametrize("seed", range(3))
    def test_random_sequences(self, seed, random_sequence):
        """Test layout windows on random rounds."""
        graphs = random_sequence(8, 140, seed)
        selection = algorithm3_derandomize(graphs, 8, 4)
        assert len(selection.nodes) <= selection_target(8, 4)
        assert selection.sums[-1] == 0

    def test_deterministic(self, random_sequence):
        """Test that the selection depends on the sequence only."""
        graphs = random_sequence(8, 140, 7)
        assert algorithm3_derandomize(graphs, 8, 4) == algorithm3_derandomize(graphs, 8, 4)

    def test_root_sum_too_large(self, static_sequence):
        """Test that a starting sum of at least one raises."""
        graphs = static_sequence(RoundGraph.path(list(range(8))), 1)
        with pytest.raises(DerandomizationError):
            algorithm3_derandomize(graphs, 8, 4, windows=[(1, 1)], target=1)

    def test_node_count_mismatch(self, static_sequence):
        """Test that n must match the sequence."""
        with pytest.raises(ScheduleError):
            algorithm3_derandomize(static_sequence(RoundGraph.clique(3), 2), 4, 2)
