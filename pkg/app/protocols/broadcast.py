"""Broadcast-model token choice policies."""
from enum import Enum
from typing import List, Optional

import numpy as np

from app.adversaries.base import BroadcastChoice
from app.config.constants import BroadcastPolicyName
from app.core.engine import Transfer
from app.core.graphs import RoundGraph
from app.core.tokens import TokenDistribution


class BroadcastPolicy(str, Enum):
    UNIFORM_RANDOM = BroadcastPolicyName.RANDOM
    ROUND_ROBIN = BroadcastPolicyName.ROUND_ROBIN
    MIN_ID = BroadcastPolicyName.MIN_ID


def choose_broadcasts(
        policy: BroadcastPolicy,
        dist: TokenDistribution,
        rng: np.random.Generator,
        round_index: int = 1,
) -> BroadcastChoice:
    """One held token per node, or None for empty holdings."""
    choices: List[Optional[int]] = []
    for held in dist.holdings:
        size = len(held)
        if size == 0:
            choices.append(None)
        elif policy == BroadcastPolicy.MIN_ID:
            choices.append(held.min_token())
        elif policy == BroadcastPolicy.ROUND_ROBIN:
            choices.append(held.nth((round_index - 1) % size))
        else:
            choices.append(held.nth(int(rng.integers(size))))
    return BroadcastChoice(tuple(choices))


def broadcast_exchanges(
        dist: TokenDistribution,
        graph: RoundGraph,
        choices: BroadcastChoice,
        round_index: int,
) -> List[Transfer]:
    """Each node's chosen token to every neighbor that lacks it."""
    transfers: List[Transfer] = []
    for node, token in enumerate(choices):
        if token is None:
            continue
        for neighbor in graph.neighbors(node):
            if not dist.holds(neighbor, token):
                transfers.append(Transfer(round_index, node, neighbor, token))
    return transfers
