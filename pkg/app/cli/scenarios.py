"""
One run of a scenario: simulation, offline scheduler or sampling protocol.

run_one is a module-level function so sweeps can ship it to worker processes.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np

from app.adversaries import parse_adversary_spec
from app.adversaries.oblivious import oblivious_sequence, parse_family_spec
from app.cli.config import ExperimentConfig, RunKind
from app.config.constants import CsvColumns
from app.core.errors import DerandomizationError, ScheduleError
from app.core.rng import SeedStreams
from app.core.schedule import validate_schedule
from app.core.tokens import TokenSet, init_distribution, parse_init_spec
from app.offline.broadcast import algorithm2
from app.offline.multiport import algorithm1, length_bound, phase_window
from app.offline.schedules import broadcast_layout, token_sources_of
from app.protocols.simulation import default_round_budget, parse_protocol_spec, run_simulation
from app.sampling.generators import parse_generator_spec
from app.sampling.protocol import sample_distribution
from app.utils.logger import run_logger
from app.utils.metrics import RunMetrics

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    run_id: str
    row: Dict[str, Any]
    success: bool
    duration: float = 0.0
    trace_columns: Sequence[str] = ()
    trace_rows: List[Dict[str, Any]] = field(default_factory=list)
    metrics: RunMetrics = field(default_factory=RunMetrics)


def run_id_for(scenario: str, n: int, k: int, rep: int) -> str:
    return f"{scenario}-n{n}-k{k}-r{rep}"


def run_seed(config: ExperimentConfig, n: int, k: int, rep: int) -> int:
    return SeedStreams(config.seed).child_seed(config.scenario, n, k, rep)


def _simulate(config: ExperimentConfig, run_id: str, n: int, k: int, seed: int) -> RunResult:
    streams = SeedStreams(seed)
    init = init_distribution(parse_init_spec(config.init), n, k, streams.stream("init"))
    protocol = parse_protocol_spec(config.protocol)
    trace = run_simulation(
        parse_adversary_spec(config.adversary),
        protocol,
        init,
        config.max_rounds or default_round_budget(n, k),
        streams,
        green_fraction=config.green_fraction,
        audit_history=config.audit,
    )
    colors = trace.color_counts()
    row = {
        "run_id": run_id, "n": n, "k": k, "seed": seed,
        "completion_round": trace.completion_round,
        "timed_out": trace.timed_out,
        **{color.value: count for color, count in colors.items()},
        "max_witness_size": trace.max_witness_size(),
        "half_missing_round": trace.round_at_missing_fraction(0.5),
        "progress_violations": trace.progress_violations,
        "witness_violations": trace.witness_violations,
    }
    return RunResult(
        run_id, row,
        success=not trace.timed_out or config.timeout_expected,
        trace_columns=CsvColumns.TRACE,
        trace_rows=[record.as_row() for record in trace.records],
        metrics=RunMetrics(
            protocol=protocol.name,
            rounds=len(trace.records),
            progress=sum(record.progress for record in trace.records),
            completion_round=trace.completion_round or None,
        ),
    )


def _offline(config: ExperimentConfig, run_id: str, n: int, k: int, seed: int) -> RunResult:
    streams = SeedStreams(seed)
    init = init_distribution(parse_init_spec(config.init), n, k, streams.stream("init"))
    family = parse_family_spec(config.adversary)
    row: Dict[str, Any] = {"run_id": run_id, "n": n, "k": k, "seed": seed}

    try:
        if config.kind == RunKind.MULTIPORT:
            rounds = length_bound(n, k, config.budget_const) + 2 * phase_window(n, k, config.budget_const)
            graphs = oblivious_sequence(family, n, rounds, streams.stream("graphs"))
            plan = algorithm1(graphs, init, streams.stream("offline"), budget_const=config.budget_const)
            row["mode"] = "multiport"
        else:
            graphs = oblivious_sequence(family, n, broadcast_layout(n, k).total_rounds,
                                        streams.stream("graphs"))
            plan = algorithm2(graphs, token_sources_of(init), streams.stream("offline"),
                              selection=config.selection)
            row["mode"] = "broadcast" if config.selection == "random" else "broadcast-derandomized"
    except (ScheduleError, DerandomizationError) as e:
        run_logger.log_run_error("_offline", run_id, f"no schedule: {e}", exc_info=False)
        row.update(valid=False)
        return RunResult(run_id, row, success=False)

    verdict = validate_schedule(plan.schedule, graphs, init)
    row.update(
        length=plan.schedule.length,
        length_bound=plan.length_bound,
        valid=verdict.ok,
        phase_flows=";".join(str(phase.flow_value) for phase in plan.phases),
        phase_retries=";".join(str(phase.retries) for phase in plan.phases),
        selected=";".join(str(v) for v in plan.selected),
    )
    run_logger.log_action("_offline", run_id, "schedule checked",
                          f"length={plan.schedule.length} bound={plan.length_bound} valid={verdict.ok}")
    metrics = RunMetrics(schedule_mode=plan.schedule.mode.value, schedule_length=plan.schedule.length,
                         flow_retries=plan.total_retries)
    return RunResult(run_id, row, success=verdict.ok, metrics=metrics)


def random_pair(k: int, rng: np.random.Generator):
    """Two uniform subsets of range(k) with a nonempty symmetric difference."""
    while True:
        a = TokenSet.from_mask(rng.random(k) < 0.5)
        b = TokenSet.from_mask(rng.random(k) < 0.5)
        if a ^ b:
            return a, b


def _sample(config: ExperimentConfig, run_id: str, k: int, seed: int) -> RunResult:
    streams = SeedStreams(seed)
    a, b = random_pair(k, streams.stream("pair"))
    stats = sample_distribution(a, b, config.eps, parse_generator_spec(config.generator),
                                streams, config.trials)
    row = {
        "run_id": run_id, "k": k, "seed": seed,
        "a": ";".join(map(str, a)), "b": ";".join(map(str, b)),
        "eps": config.eps, "trials": stats.trials,
        "empty_verdicts": stats.empty_verdicts,
        "tv_distance": stats.tv_distance,
        "mean_bits": stats.mean_bits,
        "seed_bits": stats.seed_bits,
    }
    histogram = [
        {"token": token, "count": count, "frequency": count / stats.trials}
        for token, count in stats.histogram.items()
    ]
    within = stats.tv_distance <= config.eps
    run_logger.log_action("_sample", run_id, "distribution measured",
                          f"tv={stats.tv_distance:.4f} eps={config.eps} trials={stats.trials}")
    return RunResult(run_id, row, success=within,
                     trace_columns=CsvColumns.SAMPLE_HISTOGRAM, trace_rows=histogram,
                     metrics=RunMetrics(transcript_bits=stats.bit_counts))


def summary_columns(config: ExperimentConfig) -> Sequence[str]:
    if config.kind == RunKind.SIMULATION:
        return CsvColumns.SIMULATION_SUMMARY
    if config.kind == RunKind.SAMPLE:
        return CsvColumns.SAMPLE_SUMMARY
    return CsvColumns.OFFLINE_SUMMARY


def run_one(config: ExperimentConfig, n: int, k: int, rep: int) -> RunResult:
    """Execute one (n, k, replicate) run of the configured scenario."""
    run_id = run_id_for(config.scenario, n, k, rep)
    seed = run_seed(config, n, k, rep)
    run_logger.log_run_start(config.scenario, run_id, n, k, seed)
    started = time.monotonic()

    try:
        if config.kind == RunKind.SIMULATION:
            result = _simulate(config, run_id, n, k, seed)
        elif config.kind == RunKind.SAMPLE:
            result = _sample(config, run_id, k, seed)
        else:
            result = _offline(config, run_id, n, k, seed)
    except Exception as e:
        run_logger.log_run_error("run_one", run_id, str(e))
        raise

    result.duration = time.monotonic() - started
    run_logger.log_run_complete(config.scenario, run_id, result.duration, result.success)
    return result
