"""
Offline broadcast scheduler.

Few tokens are flooded one by one. Otherwise every token is first gathered
at each node of a gather set S, then flooded from its holders in a window
of its own; S is sampled at random or chosen by the derandomized scan.
"""
import logging
from typing import AbstractSet, List, Mapping, Optional, Tuple

import numpy as np

from app.core.engine import Transfer
from app.core.errors import ScheduleError
from app.core.graphs import GraphSequence
from app.core.schedule import Schedule, ScheduleMode, replay_schedule, validate_schedule
from app.core.tokens import TokenDistribution
from app.offline.derandomize import algorithm3_derandomize
from app.offline.schedules import (
    OfflinePlan,
    broadcast_layout,
    distribution_from_sources,
    gather_schedule,
)
from app.utils.metrics import record_schedule

logger = logging.getLogger(__name__)

MODE = ScheduleMode.BROADCAST
SELECTIONS = ("random", "derandomize")


def broadcast_distance(
        graphs: GraphSequence,
        window_start: int,
        budget: int,
        holders: AbstractSet[int],
        target: int,
) -> Optional[int]:
    """Rounds until flooding from holders reaches target, None past budget."""
    if target in holders:
        return 0
    reached = set(holders)
    for distance in range(1, budget + 1):
        round_index = window_start + distance - 1
        if round_index > len(graphs):
            break
        graph = graphs.graph(round_index)
        reached |= {u for v in reached for u in graph.neighbors(v)}
        if target in reached:
            return distance
    return None


def flood_schedule(
        graphs: GraphSequence,
        dist: TokenDistribution,
        token: int,
        start_round: int,
        rounds: int,
) -> Tuple[List[Transfer], TokenDistribution]:
    """Every holder broadcasts token for up to rounds rounds; only useful
    transfers are emitted. Returns (transfers, distribution after)."""
    if start_round - 1 + rounds > len(graphs):
        raise ScheduleError(f"flooding window from round {start_round} exceeds the sequence")
    holders = set(dist.holders(token))
    transfers: List[Transfer] = []
    for round_index in range(start_round, start_round + rounds):
        if len(holders) == dist.n:
            break
        graph = graphs.graph(round_index)
        fresh = [Transfer(round_index, u, v, token)
                 for u in sorted(holders) for v in graph.neighbors(u) if v not in holders]
        transfers.extend(fresh)
        holders |= {t.receiver for t in fresh}
    updates = {v: dist[v].with_token(token) for v in holders if not dist.holds(v, token)}
    return transfers, dist.replace(updates)


def algorithm2(
        graphs: GraphSequence,
        token_sources: Mapping[int, int],
        rng: np.random.Generator,
        selection: str = "random",
) -> OfflinePlan:
    """Broadcast schedule delivering every token to every node."""
    if selection not in SELECTIONS:
        raise ValueError(f"unknown selection {selection!r}, expected one of {SELECTIONS}")
    n, k = graphs.n, len(token_sources)
    layout = broadcast_layout(n, k)
    init = distribution_from_sources(n, token_sources)
    if n == 1 or k == 0 or init.is_complete():
        return OfflinePlan(Schedule.build(MODE, []), length_bound=0)
    if layout.total_rounds > len(graphs):
        raise ScheduleError(f"broadcast schedule needs {layout.total_rounds} rounds, "
                            f"sequence has {len(graphs)}")

    selected: Tuple[int, ...] = ()
    schedule = Schedule.build(MODE, [])
    dist = init
    if layout.sample_target:
        if selection == "derandomize":
            members = algorithm3_derandomize(graphs, n, k, layout.windows).nodes
        else:
            members = rng.choice(n, size=layout.sample_target, replace=False)
        selected = tuple(sorted(int(v) for v in members))
        for position, member in enumerate(selected):
            gathered = gather_schedule(graphs, token_sources, member, MODE,
                                       start_round=1 + position * (n + k))
            schedule = schedule.merged(gathered)
        dist = replay_schedule(schedule, graphs, init)
        logger.info(f"[algorithm2] gathered at {len(selected)} nodes | selection={selection}")

    transfers: List[Transfer] = []
    for token, (start, length) in enumerate(layout.windows):
        flooded, dist = flood_schedule(graphs, dist, token, start, length)
        transfers.extend(flooded)
    schedule = schedule.merged(Schedule.build(MODE, transfers))

    verdict = validate_schedule(schedule, graphs, init)
    if not verdict:
        raise ScheduleError(f"broadcast schedule invalid: {verdict.violation.value} {verdict.detail}")

    plan = OfflinePlan(schedule, selected=selected, length_bound=layout.total_rounds)
    record_schedule(MODE.value, schedule.length)
    logger.info(f"[algorithm2] schedule ready | length={schedule.length} bound={plan.length_bound}")
    return plan
