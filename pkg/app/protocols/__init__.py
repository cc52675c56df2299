from app.protocols.analysis import (
    GroupPartition,
    RoundColor,
    classify_round,
    groups,
    inter_group_edges,
    union_missing,
)
from app.protocols.broadcast import BroadcastPolicy, broadcast_exchanges, choose_broadcasts
from app.protocols.simulation import (
    GossipProtocol,
    RoundRecord,
    RunTrace,
    default_round_budget,
    parse_protocol_spec,
    run_simulation,
)
from app.protocols.symdiff import (
    RoundExchange,
    det_symdiff_exchanges,
    random_orientation,
    symdiff_exchanges,
    symdiff_oriented_exchanges,
)

__all__ = [
    'BroadcastPolicy',
    'GossipProtocol',
    'GroupPartition',
    'RoundColor',
    'RoundExchange',
    'RoundRecord',
    'RunTrace',
    'broadcast_exchanges',
    'choose_broadcasts',
    'classify_round',
    'default_round_budget',
    'det_symdiff_exchanges',
    'groups',
    'inter_group_edges',
    'parse_protocol_spec',
    'random_orientation',
    'run_simulation',
    'symdiff_exchanges',
    'symdiff_oriented_exchanges',
    'union_missing',
]
