"""
Round loop driving an adversary and a forwarding protocol.
"""
import logging
import math
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from app.adversaries.base import Adversary, BroadcastChoice
from app.adversaries.strong import StrongAdversary, half_empty_holds, half_empty_witness
from app.config.constants import BroadcastPolicyName, Defaults, SpecPrefix
from app.core.engine import Transfer, apply_exchanges
from app.core.errors import ConfigError, ModelOrderingError
from app.core.graphs import RoundGraph
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution
from app.protocols.analysis import RoundColor, classify_round, groups, inter_group_edges
from app.protocols.broadcast import BroadcastPolicy, broadcast_exchanges, choose_broadcasts
from app.protocols.symdiff import (
    det_symdiff_exchanges,
    random_orientation,
    symdiff_exchanges,
    symdiff_oriented_exchanges,
)
from app.utils.metrics import record_completion, record_round

logger = logging.getLogger(__name__)


class GossipProtocol(ABC):
    """A token-forwarding protocol."""

    name: str = "protocol"
    broadcast: bool = False  # choices are fixed before the graph is known

    def choose(self, dist: TokenDistribution, streams: SeedStreams, round_index: int) -> Optional[BroadcastChoice]:
        return None

    @abstractmethod
    def exchanges(
            self,
            dist: TokenDistribution,
            graph: RoundGraph,
            streams: SeedStreams,
            round_index: int,
            choices: Optional[BroadcastChoice] = None,
    ) -> List[Transfer]:
        ...


class BroadcastProtocol(GossipProtocol):
    broadcast = True

    def __init__(self, policy: BroadcastPolicy):
        self.policy = policy
        self.name = f"{SpecPrefix.BROADCAST}:{policy.value}"

    def choose(self, dist, streams, round_index):
        return choose_broadcasts(self.policy, dist, streams.stream("broadcast", round_index), round_index)

    def exchanges(self, dist, graph, streams, round_index, choices=None):
        return broadcast_exchanges(dist, graph, choices, round_index)


class SymDiffProtocol(GossipProtocol):
    name = SpecPrefix.SYMDIFF

    def exchanges(self, dist, graph, streams, round_index, choices=None):
        return list(symdiff_exchanges(dist, graph, streams, round_index))


class OrientedSymDiffProtocol(GossipProtocol):
    """Inter-group edges oriented uniformly among legal directions."""

    name = SpecPrefix.SYMDIFF_ORIENTED

    def exchanges(self, dist, graph, streams, round_index, choices=None):
        orientation = random_orientation(dist, graph, streams, round_index)
        return list(symdiff_oriented_exchanges(dist, graph, orientation, streams, round_index))


class DetSymDiffProtocol(GossipProtocol):
    name = SpecPrefix.DET_SYMDIFF

    def exchanges(self, dist, graph, streams, round_index, choices=None):
        return list(det_symdiff_exchanges(dist, graph, round_index))


def parse_protocol_spec(text: str) -> GossipProtocol:
    """`symdiff`, `symdiff-oriented`, `det-symdiff`, `bcast:random|round-robin|min-id`."""
    name, _, arg = text.strip().partition(":")
    if name == SpecPrefix.SYMDIFF and not arg:
        return SymDiffProtocol()
    if name == SpecPrefix.SYMDIFF_ORIENTED and not arg:
        return OrientedSymDiffProtocol()
    if name == SpecPrefix.DET_SYMDIFF and not arg:
        return DetSymDiffProtocol()
    if name == SpecPrefix.BROADCAST:
        try:
            return BroadcastProtocol(BroadcastPolicy(arg or BroadcastPolicyName.RANDOM))
        except ValueError as e:
            raise ConfigError(f"unknown broadcast policy in {text!r}") from e
    raise ConfigError(f"unknown protocol {text!r}")


@dataclass(frozen=True)
class RoundRecord:
    round: int
    progress: int
    missing_total: int  # after the round
    groups: int  # at round start
    inter_group_edges: int
    color: RoundColor
    components: Optional[int] = None
    witness_size: Optional[int] = None

    def as_row(self) -> Dict[str, object]:
        return {
            "round": self.round,
            "progress": self.progress,
            "missing_total": self.missing_total,
            "groups": self.groups,
            "inter_group_edges": self.inter_group_edges,
            "components": self.components,
            "witness_size": self.witness_size,
            "color": self.color.value,
        }


@dataclass
class RunTrace:
    initial_missing: int
    records: List[RoundRecord] = field(default_factory=list)
    completion_round: Optional[int] = None
    progress_violations: int = 0  # rounds with progress > 2 * (components - 1)
    witness_violations: int = 0  # witnesses failing against the current or an earlier round

    @property
    def timed_out(self) -> bool:
        return self.completion_round is None

    def color_counts(self) -> Dict[RoundColor, int]:
        counts = Counter(record.color for record in self.records)
        return {color: counts.get(color, 0) for color in RoundColor}

    def max_witness_size(self) -> Optional[int]:
        sizes = [r.witness_size for r in self.records if r.witness_size is not None]
        return max(sizes) if sizes else None

    def round_at_missing_fraction(self, fraction: float) -> Optional[int]:
        """First round after which at most fraction * initial missing remain."""
        if self.initial_missing <= fraction * self.initial_missing:
            return 0
        for record in self.records:
            if record.missing_total <= fraction * self.initial_missing:
                return record.round
        return None


def run_simulation(
        adversary: Adversary,
        protocol: GossipProtocol,
        init: TokenDistribution,
        max_rounds: int,
        streams: SeedStreams,
        green_fraction: float = Defaults.GREEN_FRACTION,
        audit_history: bool = False,
) -> RunTrace:
    """Run rounds until completion or max_rounds.

    Args:
        adversary: Graph source; a strongly adaptive one sees the broadcast choices.
        protocol: Forwarding rule; must fix its choices before the graph when
                  the adversary is strongly adaptive.
        init: Initial holdings.
        max_rounds: Round budget.
        streams: Per-run random streams.
        green_fraction: Fraction of a node's missing tokens that makes a round green.
        audit_history: Also check every witness against the first and the previous
                       distributions, and that holdings never shrink between rounds.
                       Together these cover every earlier round without keeping them.

    Returns:
        RunTrace with per-round records.
    """
    if adversary.strongly_adaptive and not protocol.broadcast:
        raise ModelOrderingError(
            f"{protocol.name} needs the graph before choosing, {adversary.name} needs choices first"
        )

    trace = RunTrace(initial_missing=init.missing_total())
    dist = init
    if dist.is_complete():
        trace.completion_round = 0
        return trace

    first = init.matrix() if audit_history else None
    previous: Optional[np.ndarray] = None
    for round_index in range(1, max_rounds + 1):
        choices = protocol.choose(dist, streams, round_index)
        report = None
        if isinstance(adversary, StrongAdversary):
            report = adversary.report_round(round_index, dist, streams, choices)
            graph = report.graph
        else:
            graph = adversary.graph_for_round(round_index, dist, streams, choices)

        transfers = protocol.exchanges(dist, graph, streams, round_index, choices)
        after, progress = apply_exchanges(dist, graph, transfers)

        components = witness_size = None
        if report is not None:
            components = len(report.components)
            if progress > 2 * (components - 1):
                trace.progress_violations += 1
                logger.warning(f"[run_simulation] round {round_index}: progress {progress} "
                               f"exceeds bound for {components} components")
            witness = half_empty_witness(report, choices)
            witness_size = witness.size
            held = dist.matrix()
            checked = [held]
            if audit_history:
                checked += [first] if previous is None else [first, previous]
                if previous is not None and bool((previous & ~held).any()):
                    trace.witness_violations += 1
                    logger.warning(f"[run_simulation] round {round_index}: holdings shrank")
                previous = held
            if not all(half_empty_holds(witness, matrix) for matrix in checked):
                trace.witness_violations += 1

        trace.records.append(RoundRecord(
            round=round_index,
            progress=progress,
            missing_total=after.missing_total(),
            groups=len(groups(dist)),
            inter_group_edges=len(inter_group_edges(dist, graph)),
            color=classify_round(dist, after, green_fraction),
            components=components,
            witness_size=witness_size,
        ))
        record_round(protocol.name, progress)
        dist = after
        if dist.is_complete():
            trace.completion_round = round_index
            record_completion(protocol.name, round_index)
            break

    logger.debug(
        f"[run_simulation] {protocol.name} vs {adversary.name} | "
        f"completion={trace.completion_round} rounds={len(trace.records)}"
    )
    return trace


def default_round_budget(n: int, k: int) -> int:
    """4 (n + k) log2 n log2 k, with logs floored at 1."""
    log_n = max(1.0, math.log2(n))
    log_k = max(1.0, math.log2(k))
    return math.ceil(4 * (n + k) * log_n * log_k)
