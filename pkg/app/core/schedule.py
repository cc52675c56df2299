"""
Offline schedules, their validator and the schedule text format.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from app.core.engine import Transfer, apply_exchanges
from app.core.errors import ScheduleError
from app.core.graphs import GraphSequence
from app.core.tokens import TokenDistribution

logger = logging.getLogger(__name__)


class ScheduleMode(str, Enum):
    MULTIPORT = "multiport"
    BROADCAST = "broadcast"


@dataclass(frozen=True)
class Schedule:
    mode: ScheduleMode
    transfers: Tuple[Transfer, ...]

    @classmethod
    def build(cls, mode: ScheduleMode, transfers: Iterable[Transfer]) -> "Schedule":
        return cls(mode, tuple(sorted(set(transfers))))

    @property
    def length(self) -> int:
        return max((t.round for t in self.transfers), default=0)

    def by_round(self) -> Dict[int, List[Transfer]]:
        rounds: Dict[int, List[Transfer]] = defaultdict(list)
        for transfer in self.transfers:
            rounds[transfer.round].append(transfer)
        return rounds

    def merged(self, other: "Schedule") -> "Schedule":
        if other.mode != self.mode:
            raise ScheduleError(f"cannot merge {self.mode.value} with {other.mode.value}")
        return Schedule.build(self.mode, self.transfers + other.transfers)


@dataclass(frozen=True)
class Goal:
    """Nodes that must end holding every token; None means all nodes."""
    sinks: Optional[FrozenSet[int]] = None

    @classmethod
    def all_nodes(cls) -> "Goal":
        return cls(None)

    @classmethod
    def sink_set(cls, nodes: Iterable[int]) -> "Goal":
        return cls(frozenset(nodes))

    def targets(self, n: int) -> Iterable[int]:
        return range(n) if self.sinks is None else sorted(self.sinks)


class Violation(str, Enum):
    NON_EDGE = "non-edge"
    SENDER_LACKS_TOKEN = "sender-lacks-token"
    CAPACITY = "capacity"
    GOAL_UNMET = "goal-unmet"
    TOO_LONG = "too-long"
    BAD_ROUND = "bad-round"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violation: Optional[Violation] = None
    transfer: Optional[Transfer] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _first_violation(
        schedule: Schedule,
        graphs: GraphSequence,
        init: TokenDistribution,
) -> Tuple[Optional[Verdict], TokenDistribution]:
    dist = init
    rounds = schedule.by_round()
    for round_index in sorted(rounds):
        if round_index < 1:
            return Verdict(False, Violation.BAD_ROUND, rounds[round_index][0],
                           f"round {round_index} precedes round 1"), dist
        graph = graphs.graph(round_index)
        transfers = sorted(rounds[round_index], key=lambda t: (t.sender, t.receiver, t.token))
        used_edges: Set[Tuple[int, int]] = set()
        sent_token: Dict[int, int] = {}
        for transfer in transfers:
            if not graph.has_edge(transfer.sender, transfer.receiver):
                return Verdict(False, Violation.NON_EDGE, transfer, "no such edge in round"), dist
            if not dist.holds(transfer.sender, transfer.token):
                return Verdict(False, Violation.SENDER_LACKS_TOKEN, transfer,
                               "sender does not hold the token at round start"), dist
            if schedule.mode == ScheduleMode.MULTIPORT:
                direction = (transfer.sender, transfer.receiver)
                if direction in used_edges:
                    return Verdict(False, Violation.CAPACITY, transfer,
                                   "second token across the same edge direction"), dist
                used_edges.add(direction)
            else:
                previous = sent_token.setdefault(transfer.sender, transfer.token)
                if previous != transfer.token:
                    return Verdict(False, Violation.CAPACITY, transfer,
                                   f"node already broadcasts token {previous} this round"), dist
        dist, _ = apply_exchanges(dist, graph, transfers)
    return None, dist


def replay_schedule(
        schedule: Schedule,
        graphs: GraphSequence,
        init: TokenDistribution,
) -> TokenDistribution:
    """Final distribution after replaying a feasible schedule."""
    if schedule.length > len(graphs):
        raise ScheduleError(f"schedule length {schedule.length} exceeds {len(graphs)} rounds")
    verdict, dist = _first_violation(schedule, graphs, init)
    if verdict is not None:
        raise ScheduleError(f"infeasible schedule: {verdict.violation.value} at {verdict.transfer}")
    return dist


def validate_schedule(
        schedule: Schedule,
        graphs: GraphSequence,
        init: TokenDistribution,
        goal: Goal = Goal.all_nodes(),
) -> Verdict:
    """Replay the schedule round by round and report the first violation."""
    if schedule.length > len(graphs):
        return Verdict(False, Violation.TOO_LONG,
                       detail=f"length {schedule.length} exceeds {len(graphs)} rounds")
    verdict, final = _first_violation(schedule, graphs, init)
    if verdict is not None:
        logger.debug(f"[validate_schedule] {verdict.violation.value} | {verdict.transfer}")
        return verdict
    for node in goal.targets(init.n):
        if final.missing(node):
            return Verdict(False, Violation.GOAL_UNMET,
                           detail=f"node {node} misses {final.missing(node)} tokens")
    return Verdict(True)


# Schedule file: "mode <m>" then lines "r u v t"

def parse_schedule(text: str) -> Schedule:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("mode "):
        raise ScheduleError("schedule file must start with 'mode multiport|broadcast'")
    try:
        mode = ScheduleMode(lines[0].split()[1])
        transfers = [Transfer(*(int(x) for x in line.split())) for line in lines[1:]]
    except (ValueError, TypeError) as e:
        raise ScheduleError(f"malformed schedule file: {e}") from e
    return Schedule.build(mode, transfers)


def format_schedule(schedule: Schedule) -> str:
    lines = [f"mode {schedule.mode.value}"]
    lines.extend(f"{t.round} {t.sender} {t.receiver} {t.token}" for t in schedule.transfers)
    return "\n".join(lines) + "\n"
