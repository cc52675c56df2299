from app.offline.broadcast import algorithm2, broadcast_distance, flood_schedule
from app.offline.derandomize import (
    Selection,
    algorithm3_derandomize,
    covers,
    exhaustive_failure_sum,
    failure_sum,
    reachable_sets,
)
from app.offline.evolution import Arc, ArcKind, EvolutionGraph, build_evolution
from app.offline.flow import FlowNetwork, FlowPath, FlowResult, max_flow
from app.offline.multiport import algorithm1
from app.offline.schedules import (
    BroadcastLayout,
    OfflinePlan,
    PhaseReport,
    broadcast_layout,
    gather_schedule,
    paths_to_schedule,
    token_sources_of,
)
from app.offline.trees import tree_decompose

__all__ = [
    'Arc',
    'ArcKind',
    'BroadcastLayout',
    'EvolutionGraph',
    'FlowNetwork',
    'FlowPath',
    'FlowResult',
    'OfflinePlan',
    'PhaseReport',
    'Selection',
    'algorithm1',
    'algorithm2',
    'algorithm3_derandomize',
    'broadcast_distance',
    'broadcast_layout',
    'build_evolution',
    'covers',
    'exhaustive_failure_sum',
    'failure_sum',
    'flood_schedule',
    'gather_schedule',
    'max_flow',
    'paths_to_schedule',
    'reachable_sets',
    'token_sources_of',
    'tree_decompose',
]
