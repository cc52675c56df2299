"""
Deterministic choice of the broadcast gather set by conditional expectations.

For a flooding window and a node v, R is the set of nodes whose flood
started at the window's first round reaches v inside the window. A gather
set S serves (v, window) iff S meets R. The failure sum counts, over all
(v, window) pairs, the probability that S plus q more nodes drawn without
replacement from the undecided ones still misses R.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import AbstractSet, FrozenSet, List, Optional, Sequence, Tuple

from app.core.errors import DerandomizationError, ScheduleError
from app.core.graphs import GraphSequence
from app.offline.schedules import broadcast_layout

logger = logging.getLogger(__name__)


def reachable_sets(
        graphs: GraphSequence,
        windows: Sequence[Tuple[int, int]],
) -> List[FrozenSet[int]]:
    """One set per (window, node), window-major: nodes that reach the node by flooding."""
    reach: List[FrozenSet[int]] = []
    for start, length in windows:
        if start < 1 or start + length - 1 > len(graphs):
            raise ScheduleError(f"window [{start}, {start + length - 1}] outside the sequence")
        for node in range(graphs.n):
            seen = {node}
            for round_index in range(start + length - 1, start - 1, -1):
                graph = graphs.graph(round_index)
                seen |= {u for v in seen for u in graph.neighbors(v)}
                if len(seen) == graphs.n:
                    break
            reach.append(frozenset(seen))
    return reach


def _completion_size(target: int, chosen: int, rest: int) -> int:
    return min(max(target - chosen, 0), rest)


def failure_sum(
        reach: Sequence[AbstractSet[int]],
        chosen: AbstractSet[int],
        decided: AbstractSet[int],
        n: int,
        target: int,
) -> Fraction:
    """Expected number of missed sets when target - |chosen| more nodes are
    drawn uniformly from the undecided ones; exact."""
    rest = n - len(decided)
    q = _completion_size(target, len(chosen), rest)
    total = comb(rest, q)
    value = Fraction(0)
    for nodes in reach:
        if nodes & chosen:
            continue
        open_nodes = len(nodes - decided)
        value += Fraction(comb(rest - open_nodes, q), total)
    return value


def exhaustive_failure_sum(
        reach: Sequence[AbstractSet[int]],
        chosen: AbstractSet[int],
        decided: AbstractSet[int],
        n: int,
        target: int,
) -> Fraction:
    """failure_sum by enumerating every completion."""
    undecided = [v for v in range(n) if v not in decided]
    q = _completion_size(target, len(chosen), len(undecided))
    completions = 0
    misses = 0
    for extra in combinations(undecided, q):
        picked = set(chosen) | set(extra)
        completions += 1
        misses += sum(1 for nodes in reach if not nodes & picked)
    return Fraction(misses, completions)


def covers(reach: Sequence[AbstractSet[int]], chosen: AbstractSet[int]) -> bool:
    return all(nodes & chosen for nodes in reach)


def selection_target(n: int, k: int) -> int:
    """Largest gather-set size within 2 * sqrt(k log2 n), capped at n."""
    log_n = math.log2(n) if n > 1 else 0.0
    return max(1, min(n, math.floor(2 * math.sqrt(k * log_n))))


@dataclass(frozen=True)
class Selection:
    nodes: FrozenSet[int]
    target: int
    sums: Tuple[Fraction, ...]  # failure sum after each scanned node, root first

    @property
    def root_sum(self) -> Fraction:
        return self.sums[0]


def algorithm3_derandomize(
        graphs: GraphSequence,
        n: int,
        k: int,
        windows: Optional[Sequence[Tuple[int, int]]] = None,
        target: Optional[int] = None,
) -> Selection:
    """Greedy scan over nodes 0..n-1: keep v when adding it does not raise
    the conditional failure sum."""
    if graphs.n != n:
        raise ScheduleError(f"graph sequence has {graphs.n} nodes, expected {n}")
    layout = broadcast_layout(n, k)
    windows = windows if windows is not None else layout.windows
    target = target if target is not None else selection_target(n, k)
    reach = reachable_sets(graphs, windows)

    chosen: set = set()
    decided: set = set()
    current = failure_sum(reach, chosen, decided, n, target)
    if current >= 1:
        raise DerandomizationError(
            f"failure sum {float(current):.3f} >= 1 at the root; no cover of size {target} guaranteed"
        )
    sums = [current]

    for v in range(n):
        decided.add(v)
        without = failure_sum(reach, chosen, decided, n, target)
        if len(chosen) < target:
            with_v = failure_sum(reach, chosen | {v}, decided, n, target)
            if with_v <= without:
                chosen.add(v)
                without = with_v
        if without > current:
            raise DerandomizationError(f"failure sum rose at node {v}: {current} -> {without}")
        current = without
        sums.append(current)

    if not covers(reach, chosen):
        raise DerandomizationError(f"selected set {sorted(chosen)} misses a reachable set")
    logger.info(f"[algorithm3_derandomize] selected {len(chosen)} of {n} | target={target} "
                f"root_sum={float(sums[0]):.3g}")
    return Selection(frozenset(chosen), target, tuple(sums))
