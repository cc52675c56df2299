"""Rotating-line adversary against deterministic symmetric-difference forwarding."""
from typing import List, Optional

from app.adversaries.base import Adversary, BroadcastChoice
from app.core.graphs import RoundGraph
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution


def rotating_line_order(round_index: int, n: int) -> List[int]:
    """Node 0 at the head, tail 1..n-1 rotated left by round_index - 1."""
    if n < 2:
        raise ValueError(f"rotating line needs n >= 2, got {n}")
    if round_index < 1:
        raise ValueError(f"rounds are 1-based, got {round_index}")
    tail = list(range(1, n))
    shift = (round_index - 1) % (n - 1)
    return [0] + tail[shift:] + tail[:shift]


def rotating_line_graph(round_index: int, n: int) -> RoundGraph:
    return RoundGraph.path(rotating_line_order(round_index, n))


class RotatingLineAdversary(Adversary):
    """Depends on the round only, so it works with every protocol."""

    name = "rotating-line"

    def graph_for_round(
            self,
            round_index: int,
            dist: TokenDistribution,
            streams: SeedStreams,
            choices: Optional[BroadcastChoice] = None,
    ) -> RoundGraph:
        return rotating_line_graph(round_index, dist.n)
