"""Tests for the offline broadcast scheduler."""
import numpy as np
import pytest

from app.core.errors import ScheduleError
from app.core.graphs import RoundGraph
from app.core.schedule import Schedule, ScheduleMode, replay_schedule, validate_schedule
from app.core.tokens import TokenDistribution
from app.offline.broadcast import algorithm2, broadcast_distance, flood_schedule
from app.offline.schedules import broadcast_layout, distribution_from_sources


class TestFlooding:
    """Tests for single-token flooding."""

    def test_line_flood(self, static_sequence):
        """Test that a line floods end to end in n - 1 rounds with useful transfers only."""
        graphs = static_sequence(RoundGraph.path([0, 1, 2, 3]), 6)
        dist = TokenDistribution.from_sets(1, [[0], [], [], []])
        transfers, after = flood_schedule(graphs, dist, 0, 1, 6)

        assert after.is_complete()
        assert [(t.round, t.sender, t.receiver) for t in transfers] == [(1, 0, 1), (2, 1, 2), (3, 2, 3)]

    def test_window_cut_short(self, static_sequence):
        """Test that flooding stops at the window end."""
        graphs = static_sequence(RoundGraph.path([0, 1, 2, 3]), 6)
        dist = TokenDistribution.from_sets(1, [[0], [], [], []])
        _, after = flood_schedule(graphs, dist, 0, 2, 2)
        assert after.holders(0) == [0, 1, 2]

    def test_window_past_sequence(self, static_sequence):
        """Test that a window past the sequence raises."""
        graphs = static_sequence(RoundGraph.clique(3), 2)
        with pytest.raises(ScheduleError):
            flood_schedule(graphs, TokenDistribution.from_sets(1, [[0], [], []]), 0, 2, 2)

    def test_broadcast_distance(self, static_sequence):
        """Test flooding distance, zero for holders and None past the budget."""
        graphs = static_sequence(RoundGraph.path([0, 1, 2, 3, 4]), 10)
        assert broadcast_distance(graphs, 1, 10, {0}, 4) == 4
        assert broadcast_distance(graphs, 1, 10, {0, 4}, 4) == 0
        assert broadcast_distance(graphs, 3, 3, {0}, 4) is None


class TestAlgorithm2:
    """Tests for algorithm2."""

    def test_single_token_line(self, static_sequence):
        """Test k = 1 on a line of four nodes: direct flooding in three rounds."""
        layout = broadcast_layout(4, 1)
        assert layout.sample_target == 0
        graphs = static_sequence(RoundGraph.path([0, 1, 2, 3]), layout.total_rounds)
        plan = algorithm2(graphs, {0: 0}, np.random.default_rng(0))

        assert plan.schedule.mode == ScheduleMode.BROADCAST
        assert plan.schedule.length == 3
        assert plan.selected == ()
        assert plan.length_bound == layout.total_rounds

    @pytest.mark.parametrize("selection", ["random", "derandomize"])
    @pytest.mark.parametrize("seed", range(2))
    def test_gathered_flooding(self, selection, seed, random_sequence):
        """Test gather then flood on random rounds."""
        n, k = 8, 4
        layout = broadcast_layout(n, k)
        graphs = random_sequence(n, layout.total_rounds, seed)
        sources = {t: (5 * t + 1) % n for t in range(k)}
        init = distribution_from_sources(n, sources)

        plan = algorithm2(graphs, sources, np.random.default_rng(seed), selection=selection)

        assert len(plan.selected) <= layout.sample_target
        assert validate_schedule(plan.schedule, graphs, init).ok
        assert replay_schedule(plan.schedule, graphs, init).is_complete()
        assert plan.schedule.length <= layout.total_rounds

    def test_gathered_members_hold_everything(self, random_sequence):
        """Test that selected members hold every token once gathering ends."""
        n, k = 8, 4
        layout = broadcast_layout(n, k)
        graphs = random_sequence(n, layout.total_rounds, 3)
        sources = {t: t for t in range(k)}
        plan = algorithm2(graphs, sources, np.random.default_rng(3))

        gather_part = Schedule.build(
            ScheduleMode.BROADCAST, [t for t in plan.schedule.transfers if t.round <= layout.gather_rounds],
        )
        after = replay_schedule(gather_part, graphs, distribution_from_sources(n, sources))
        assert all(len(after[v]) == k for v in plan.selected)

    def test_sequence_too_short(self, static_sequence):
        """Test that a sequence shorter than the layout raises."""
        graphs = static_sequence(RoundGraph.clique(8), 10)
        with pytest.raises(ScheduleError):
            algorithm2(graphs, {t: t for t in range(4)}, np.random.default_rng(0))

    def test_unknown_selection(self, static_sequence):
        """Test that selection modes are checked."""
        with pytest.raises(ValueError):
            algorithm2(static_sequence(RoundGraph.clique(2), 2), {0: 0}, np.random.default_rng(0), selection="best")

    def test_trivial_inputs(self, static_sequence):
        """Test that a single node needs no transfers."""
        single = static_sequence(RoundGraph(1, frozenset()), 1)
        assert algorithm2(single, {0: 0, 1: 0}, np.random.default_rng(0)).schedule.transfers == ()
