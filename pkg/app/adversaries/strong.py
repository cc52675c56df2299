"""
Strongly adaptive adversary built from free edges.

An edge is free when neither direction can deliver a new token. The
adversary keeps every free edge and joins the free-edge components by a
line, so only components - 1 edges can carry useful exchanges.
"""
import logging
from typing import List, Optional

import networkx as nx
import numpy as np

from app.adversaries.base import Adversary, AdversaryRoundReport, BroadcastChoice, HalfEmptyConfig
from app.core.errors import ContractError
from app.core.graphs import RoundGraph
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution

logger = logging.getLogger(__name__)


def _useless(sender: int, receiver: int, dist: TokenDistribution, choices: BroadcastChoice) -> bool:
    token = choices[sender]
    return token is None or dist.holds(receiver, token)


def is_free_edge(u: int, v: int, dist: TokenDistribution, choices: BroadcastChoice) -> bool:
    """True iff both directions of (u, v) are useless this round."""
    if u == v:
        raise ValueError(f"free-edge test needs two distinct nodes, got {u}")
    for node in (u, v):
        token = choices[node]
        if token is not None and not dist.holds(node, token):
            raise ContractError(f"node {node} chose token {token} it does not hold")
    return _useless(u, v, dist, choices) and _useless(v, u, dist, choices)


def free_edge_matrix(dist: TokenDistribution, choices: BroadcastChoice) -> np.ndarray:
    """Symmetric n x n boolean matrix of free pairs (diagonal False)."""
    held = dist.matrix()
    chosen = np.array([-1 if t is None else t for t in choices], dtype=np.int64)
    silent = chosen < 0
    # useless[u, v]: u -> v delivers nothing new
    useless = held[:, np.where(silent, 0, chosen)].T | silent[:, None]
    free = useless & useless.T
    np.fill_diagonal(free, False)
    return free


def strongly_adaptive_graph(
        dist: TokenDistribution,
        choices: BroadcastChoice,
        rng: np.random.Generator,
) -> AdversaryRoundReport:
    """All free edges plus a random line over one random node per free-edge component."""
    choices.check_against(dist)
    free = free_edge_matrix(dist, choices)
    free_edges = [(int(u), int(v)) for u, v in np.argwhere(np.triu(free, 1))]

    components_graph = nx.Graph()
    components_graph.add_nodes_from(range(dist.n))
    components_graph.add_edges_from(free_edges)
    components = sorted((frozenset(c) for c in nx.connected_components(components_graph)), key=min)

    picks = [int(rng.choice(sorted(component))) for component in components]
    permutation = [int(i) for i in rng.permutation(len(components))]
    order = [picks[i] for i in permutation]
    line = list(zip(order, order[1:]))

    graph = RoundGraph.from_edges(dist.n, free_edges + line)
    report = AdversaryRoundReport(
        graph=graph,
        components=tuple(components[i] for i in permutation),
        representatives=tuple(order),
        non_free_edge_count=len(line),
    )
    logger.debug(
        f"[strongly_adaptive_graph] {len(free_edges)} free edges | {len(components)} components"
    )
    return report


def half_empty_witness(report: AdversaryRoundReport, choices: BroadcastChoice) -> HalfEmptyConfig:
    """One broadcasting node per component with its chosen token.

    The representative is used when it broadcasts; otherwise the
    lowest-id broadcasting member stands in. Components with no
    broadcasting member are dropped and counted.
    """
    nodes: List[int] = []
    tokens: List[int] = []
    dropped = 0
    for rep, component in zip(report.representatives, report.components):
        node: Optional[int] = rep if choices[rep] is not None else next(
            (member for member in sorted(component) if choices[member] is not None), None
        )
        if node is None:
            dropped += 1
            continue
        nodes.append(node)
        tokens.append(choices[node])
    if len(set(tokens)) != len(tokens):
        raise ContractError(f"witness tokens repeat: {tokens}")
    return HalfEmptyConfig(tuple(nodes), tuple(tokens), dropped)


def half_empty_holds(config: HalfEmptyConfig, held: np.ndarray) -> bool:
    """verify_half_empty against a precomputed n x k holdings matrix."""
    if config.size < 2:
        return True
    sub = held[np.ix_(config.nodes, config.tokens)]
    both = sub & sub.T
    np.fill_diagonal(both, False)
    return not bool(both.any())


def verify_half_empty(config: HalfEmptyConfig, dist: TokenDistribution) -> bool:
    """True iff for all i != j, v_i lacks t_j or v_j lacks t_i."""
    for node in config.nodes:
        if not 0 <= node < dist.n:
            raise ValueError(f"node {node} outside [0, {dist.n})")
    for token in config.tokens:
        if not 0 <= token < dist.k:
            raise ValueError(f"token {token} outside [0, {dist.k})")
    return half_empty_holds(config, dist.matrix())


class StrongAdversary(Adversary):
    """Sees the broadcast choices, then builds the free-edge graph."""

    name = "strong"
    strongly_adaptive = True

    def __init__(self):
        self.last_report: Optional[AdversaryRoundReport] = None

    def report_round(
            self,
            round_index: int,
            dist: TokenDistribution,
            streams: SeedStreams,
            choices: BroadcastChoice,
    ) -> AdversaryRoundReport:
        self.last_report = strongly_adaptive_graph(dist, choices, streams.stream("adversary", round_index))
        return self.last_report

    def graph_for_round(
            self,
            round_index: int,
            dist: TokenDistribution,
            streams: SeedStreams,
            choices: Optional[BroadcastChoice] = None,
    ) -> RoundGraph:
        if choices is None:
            raise ContractError("strongly adaptive adversary needs the broadcast choices first")
        return self.report_round(round_index, dist, streams, choices).graph

