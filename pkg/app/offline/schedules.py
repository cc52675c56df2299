"""
Turning flows into schedules, gathering tokens at a node, and the plan
types returned by the offline schedulers.
"""
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Tuple

from app.core.engine import Transfer
from app.core.errors import ScheduleError
from app.core.graphs import GraphSequence
from app.core.schedule import Schedule, ScheduleMode
from app.core.tokens import TokenDistribution
from app.offline.evolution import ArcKind, EvolutionGraph, build_evolution
from app.offline.flow import FlowResult, max_flow

logger = logging.getLogger(__name__)

_MOVING_ARCS = (ArcKind.TRANSMIT, ArcKind.BROADCAST)


@dataclass(frozen=True)
class PhaseReport:
    index: int
    sinks: Tuple[int, ...]
    source_count: int
    start_round: int
    window: int
    flow_value: int
    retries: int


@dataclass
class OfflinePlan:
    schedule: Schedule
    phases: List[PhaseReport] = field(default_factory=list)
    root: Optional[int] = None  # gather node of the multiport scheduler
    selected: Tuple[int, ...] = ()  # gather set of the broadcast scheduler
    length_bound: int = 0

    @property
    def total_retries(self) -> int:
        return sum(phase.retries for phase in self.phases)


@dataclass(frozen=True)
class BroadcastLayout:
    """Round layout of the broadcast scheduler: a gather region, then one
    flooding window per token."""
    n: int
    k: int
    sample_target: int
    gather_rounds: int
    flood_window: int

    @property
    def windows(self) -> List[Tuple[int, int]]:
        """(start round, length) of each token's flooding window."""
        return [(self.gather_rounds + t * self.flood_window + 1, self.flood_window)
                for t in range(self.k)]

    @property
    def total_rounds(self) -> int:
        return self.gather_rounds + self.k * self.flood_window


def broadcast_layout(n: int, k: int) -> BroadcastLayout:
    log_n = math.log2(n) if n > 1 else 0.0
    if k <= math.sqrt(log_n):
        return BroadcastLayout(n, k, sample_target=0, gather_rounds=0, flood_window=n)
    target = min(n, max(1, math.floor(2 * math.sqrt(k * log_n))))
    window = math.ceil(2 * n * math.sqrt(log_n / k))
    return BroadcastLayout(n, k, sample_target=target, gather_rounds=target * (n + k),
                           flood_window=window)


def token_sources_of(dist: TokenDistribution) -> Dict[int, int]:
    """Lowest-id holder of every token."""
    sources = {}
    for token in range(dist.k):
        holders = dist.holders(token)
        if not holders:
            raise ScheduleError(f"token {token} has no holder")
        sources[token] = holders[0]
    return sources


def distribution_from_sources(n: int, token_sources: Mapping[int, int]) -> TokenDistribution:
    sets: List[List[int]] = [[] for _ in range(n)]
    for token, node in token_sources.items():
        sets[node].append(token)
    return TokenDistribution.from_sets(len(token_sources), sets)


def paths_to_schedule(
        flow: FlowResult,
        evolution: EvolutionGraph,
        holdings: TokenDistribution,
        round_offset: int = 0,
) -> Schedule:
    """Read transfers off the moving arcs of token-labelled flow paths.

    Args:
        flow: Flow whose paths all carry a token label
        evolution: The evolution graph the flow lives in
        holdings: Distribution at the first round of the window
        round_offset: Added to every arc round

    Returns:
        Schedule in the evolution graph's mode
    """
    usage: Counter = Counter()
    transfers = []
    for path in flow.paths:
        if path.token is None:
            raise ScheduleError(f"path from node {path.origin} carries no token")
        if not holdings.holds(path.origin, path.token):
            raise ScheduleError(f"path origin {path.origin} lacks token {path.token}")
        for index in path.arcs:
            arc = evolution.arcs[index]
            usage[index] += 1
            if usage[index] > arc.capacity:
                raise ScheduleError(f"paths share unit arc {arc.tail}->{arc.head}")
            if arc.kind in _MOVING_ARCS:
                sender, _ = evolution.node_of(arc.tail)
                receiver, _ = evolution.node_of(arc.head)
                transfers.append(Transfer(arc.round + round_offset, sender, receiver, path.token))
    return Schedule.build(evolution.mode, transfers)


def _label_by_origin(flow: FlowResult, token_sources: Mapping[int, int]) -> FlowResult:
    pending: Dict[int, List[int]] = defaultdict(list)
    for token, node in sorted(token_sources.items()):
        pending[node].append(token)
    labelled = []
    for path in sorted(flow.paths, key=lambda p: p.arcs):
        tokens = pending[path.origin]
        if tokens:
            labelled.append(replace(path, token=tokens.pop(0)))
    return FlowResult(flow.value, flow.arc_flows, labelled)


def shortest_flow(
        graphs: GraphSequence,
        start_round: int,
        max_length: int,
        mode: ScheduleMode,
        token_count: int,
        sources: Mapping[int, int],
        sinks: Mapping[int, int],
        demand: int,
) -> Tuple[int, EvolutionGraph, FlowResult]:
    """Fewest rounds from start_round whose evolution graph carries demand.

    Flow value is monotone in the horizon; bisects over [1, max_length].

    Returns:
        (horizon, evolution graph, flow); the max_length attempt when even
        that falls short of demand
    """
    def solve(length: int) -> Tuple[EvolutionGraph, FlowResult]:
        evolution = build_evolution(graphs.window(start_round, length), length, mode,
                                    token_count=token_count)
        return evolution, max_flow(evolution, sources, sinks)

    evolution, flow = solve(max_length)
    best = (max_length, evolution, flow)
    if flow.value < demand:
        return best
    low, high = 1, max_length
    while low < high:
        middle = (low + high) // 2
        evolution, flow = solve(middle)
        if flow.value >= demand:
            high = middle
            best = (middle, evolution, flow)
        else:
            low = middle + 1
    logger.debug(f"[shortest_flow] {mode.value} | start={start_round} horizon={best[0]} max={max_length}")
    return best


def gather_schedule(
        graphs: GraphSequence,
        token_sources: Mapping[int, int],
        target: int,
        mode: ScheduleMode,
        start_round: int = 1,
) -> Schedule:
    """Move every token to target in the fewest rounds from start_round,
    never more than n + k."""
    n, k = graphs.n, len(token_sources)
    if all(node == target for node in token_sources.values()):
        return Schedule.build(mode, [])
    window = n + k
    if start_round - 1 + window > len(graphs):
        raise ScheduleError(
            f"gather needs rounds {start_round}..{start_round + window - 1}, "
            f"sequence has {len(graphs)}"
        )

    _, evolution, flow = shortest_flow(
        graphs, start_round, window, mode, k,
        Counter(token_sources.values()), {target: k}, demand=k,
    )
    if flow.value < k:
        raise ScheduleError(f"gather flow {flow.value} < {k} tokens at node {target}")

    schedule = paths_to_schedule(
        _label_by_origin(flow, token_sources),
        evolution,
        distribution_from_sources(n, token_sources),
        round_offset=start_round - 1,
    )
    logger.debug(f"[gather_schedule] {mode.value} | target={target} length={schedule.length}")
    return schedule


def sink_paths_labelled(flow: FlowResult, k: int) -> FlowResult:
    """Label each sink's paths with tokens 0..k-1 in lexicographic path order."""
    counts: Dict[int, int] = defaultdict(int)
    labelled = []
    for path in sorted(flow.paths, key=lambda p: (p.sink, p.arcs)):
        if counts[path.sink] < k:
            labelled.append(replace(path, token=counts[path.sink]))
            counts[path.sink] += 1
    return FlowResult(flow.value, flow.arc_flows, labelled)
