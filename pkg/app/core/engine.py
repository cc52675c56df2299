"""
The round engine: applies one round of transfers to a distribution.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Set, Tuple

from app.core.errors import ExchangeError
from app.core.graphs import RoundGraph
from app.core.tokens import TokenDistribution, TokenSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Transfer:
    """One token sent along one directed edge in one round."""
    round: int
    sender: int
    receiver: int
    token: int


def apply_exchanges(
        dist: TokenDistribution,
        graph: RoundGraph,
        exchanges: Iterable[Transfer],
) -> Tuple[TokenDistribution, int]:
    """Apply one round of transfers against pre-round holdings.

    Returns:
        Tuple of (new distribution, progress) where progress counts the
        (receiver, token) pairs that were missing before the round.
    """
    seen: Set[Tuple[int, int, int]] = set()
    gains: Dict[int, int] = {}

    for transfer in exchanges:
        key = (transfer.sender, transfer.receiver, transfer.token)
        if key in seen:
            raise ExchangeError(f"duplicate transfer {transfer}")
        seen.add(key)
        if not graph.has_edge(transfer.sender, transfer.receiver):
            raise ExchangeError(f"transfer over non-edge {transfer}")
        if not dist.holds(transfer.sender, transfer.token):
            raise ExchangeError(f"sender lacks token in {transfer}")
        gains[transfer.receiver] = gains.get(transfer.receiver, 0) | (1 << transfer.token)

    if not gains:
        return dist, 0

    progress = 0
    updates = {}
    for node, gained in gains.items():
        old = dist[node].bits
        new_bits = gained & ~old
        if new_bits:
            progress += new_bits.bit_count()
            updates[node] = TokenSet(dist.k, old | new_bits)
    return dist.replace(updates), progress
