"""
Offline multiport scheduler: gather every token at a random node, then
spread them in phases to doubling random sink sets with maximum flows.
"""
import logging
import math
from typing import List, Optional

import numpy as np

from app.config.constants import FlowConfig
from app.config.settings import settings
from app.core.errors import ScheduleError
from app.core.graphs import GraphSequence
from app.core.schedule import Schedule, ScheduleMode, replay_schedule, validate_schedule
from app.core.tokens import TokenDistribution
from app.offline.schedules import (
    OfflinePlan,
    PhaseReport,
    gather_schedule,
    paths_to_schedule,
    shortest_flow,
    sink_paths_labelled,
    token_sources_of,
)
from app.utils.metrics import record_schedule

logger = logging.getLogger(__name__)

MODE = ScheduleMode.MULTIPORT


def phase_window(n: int, k: int, budget_const: int) -> int:
    return budget_const * (n + k) * max(1, math.ceil(math.log2(n)))


def phase_count(n: int) -> int:
    return int(math.floor(math.log2(n))) + 1


def length_bound(n: int, k: int, budget_const: int) -> int:
    """Gather window plus one un-retried window per phase."""
    return (n + k) + phase_count(n) * phase_window(n, k, budget_const)


def algorithm1(
        graphs: GraphSequence,
        init: TokenDistribution,
        rng: np.random.Generator,
        budget_const: Optional[int] = None,
        max_retries: Optional[int] = None,
) -> OfflinePlan:
    """Multiport schedule delivering every token to every node.

    Args:
        graphs: The whole graph sequence, known in advance
        init: Initial distribution; every token needs a holder
        rng: Source of the root choice and the sink samples
        budget_const: Phase window constant (settings default)
        max_retries: Window doublings allowed per phase (settings default)

    Returns:
        OfflinePlan with the validated schedule and one report per phase
    """
    budget_const = budget_const if budget_const is not None else settings.ALG1_BUDGET_CONST
    max_retries = max_retries if max_retries is not None else settings.ALG1_MAX_RETRIES
    n, k = init.n, init.k
    if graphs.n != n:
        raise ScheduleError(f"graph sequence has {graphs.n} nodes, distribution has {n}")
    if n == 1 or init.is_complete():
        return OfflinePlan(Schedule.build(MODE, []), length_bound=0)

    sources = token_sources_of(init)
    root = int(rng.integers(n))
    schedule = gather_schedule(graphs, sources, root, MODE)
    logger.info(f"[algorithm1] gathered {k} tokens at node {root} | length={schedule.length}")

    window = phase_window(n, k, budget_const)
    cursor = schedule.length + 1
    source_nodes = {root}
    phases: List[PhaseReport] = []

    for index in range(phase_count(n)):
        size = n if index == phase_count(n) - 1 else min(2 ** index, n)
        sinks = tuple(sorted(int(v) for v in rng.choice(n, size=size, replace=False)))
        holdings = replay_schedule(schedule, graphs, init)
        wanted = size * k

        retries = 0
        while True:
            available = len(graphs) - cursor + 1
            limit = min(window * FlowConfig.RETRY_GROWTH ** retries, available)
            if limit < 1:
                raise ScheduleError(f"no rounds left for phase {index}", phase=index)
            length, evolution, flow = shortest_flow(
                graphs, cursor, limit, MODE, k,
                {v: wanted for v in sorted(source_nodes)},
                {v: k for v in sinks},
                demand=wanted,
            )
            if flow.value >= wanted:
                break
            if retries >= max_retries or limit == available:
                raise ScheduleError(
                    f"phase {index} flow {flow.value} < {wanted} after {retries} retries",
                    phase=index,
                )
            retries += 1
            cursor += limit
            logger.warning(f"[algorithm1] phase {index} flow deficit | "
                           f"value={flow.value} wanted={wanted}, retrying from round {cursor}")

        step = paths_to_schedule(sink_paths_labelled(flow, k), evolution, holdings,
                                 round_offset=cursor - 1)
        phases.append(PhaseReport(
            index=index,
            sinks=sinks,
            source_count=len(source_nodes),
            start_round=cursor,
            window=length,
            flow_value=flow.value,
            retries=retries,
        ))
        logger.debug(f"[algorithm1] phase {index} | sinks={size} sources={len(source_nodes)} "
                     f"window={length} transfers={len(step.transfers)}")
        schedule = schedule.merged(step)
        cursor = max(cursor, schedule.length + 1)
        source_nodes.update(sinks)

    verdict = validate_schedule(schedule, graphs, init)
    if not verdict:
        raise ScheduleError(f"emitted schedule invalid: {verdict.violation.value} {verdict.detail}")

    plan = OfflinePlan(schedule, phases, root=root, length_bound=length_bound(n, k, budget_const))
    record_schedule(MODE.value, schedule.length, plan.total_retries)
    logger.info(f"[algorithm1] schedule ready | length={schedule.length} "
                f"bound={plan.length_bound} retries={plan.total_retries}")
    return plan
