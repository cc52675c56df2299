"""
Command-line entry: simulate, offline, sample and experiment subcommands.

Exit codes: 0 success, 1 failed run or invalid schedule, 2 rejected input.
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

from app.cli.config import ExperimentConfig, RunKind, build_config, load_config_file
from app.cli.experiment import run_experiment
from app.config.constants import Artifacts, CsvColumns, Scenarios
from app.config.settings import settings
from app.core.errors import ConfigError, DerandomizationError, GossipError, ScheduleError
from app.core.file_manager import create_file_manager
from app.core.graphs import parse_graph_sequence
from app.core.rng import SeedStreams
from app.core.schedule import format_schedule, validate_schedule
from app.core.tokens import TokenSet, init_distribution, parse_distribution, parse_init_spec
from app.offline.broadcast import algorithm2
from app.offline.multiport import algorithm1
from app.offline.schedules import token_sources_of
from app.sampling.generators import parse_generator_spec
from app.sampling.protocol import sample_distribution
from app.utils.logger import setup_logging
from app.utils.metrics import start_metrics_server

logger = logging.getLogger(__name__)

OFFLINE_MODES = ("multiport", "broadcast", "derandomize")


def _csv_help() -> str:
    lines = ["CSV columns:"]
    for name in ("TRACE", "SIMULATION_SUMMARY", "OFFLINE_SUMMARY", "SAMPLE_SUMMARY", "SAMPLE_HISTOGRAM"):
        lines.append(f"  {name.lower()}: {','.join(getattr(CsvColumns, name))}")
    return "\n".join(lines)


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="root seed")
    common.add_argument("--out-dir", default=settings.OUT_DIR, help="artifact directory")
    common.add_argument("--jobs", type=int, default=settings.DEFAULT_JOBS, help="worker processes")
    common.add_argument("--log-level", default=settings.LOG_LEVEL)
    common.add_argument("--metrics-port", type=int, default=settings.METRICS_PORT,
                        help="serve Prometheus metrics on this port (0 disables)")

    parser = argparse.ArgumentParser(
        prog="kgossip",
        description="k-gossip lab: adversarial token dissemination and offline schedules",
        epilog=_csv_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="one simulated run")
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--k", type=int, required=True)
    simulate.add_argument("--adversary", default="random:0.05")
    simulate.add_argument("--protocol", default="symdiff")
    simulate.add_argument("--init", default="well-mixed:0.5")
    simulate.add_argument("--max-rounds", type=int)
    simulate.add_argument("--green-fraction", type=float, default=settings.GREEN_FRACTION)
    simulate.add_argument("--audit", action="store_true", help="check witnesses against all earlier rounds")

    offline = sub.add_parser("offline", parents=[common], help="offline schedule for a graph file")
    offline.add_argument("--mode", choices=OFFLINE_MODES, required=True)
    offline.add_argument("--graphs", required=True, help="graph-sequence file")
    offline.add_argument("--init", required=True, help="distribution file or init spec")
    offline.add_argument("--k", type=int, help="token count when --init is a spec")
    offline.add_argument("--out", help="schedule file (default <out-dir>/schedule.txt)")
    offline.add_argument("--budget-const", type=int, default=settings.ALG1_BUDGET_CONST)
    offline.add_argument("--validate", action="store_true")

    sample = sub.add_parser("sample", parents=[common], help="sampling protocol on one pair")
    sample.add_argument("--k", type=int, required=True)
    sample.add_argument("--a", "--A", dest="a", default="", help="comma-separated token ids of Alice")
    sample.add_argument("--b", "--B", dest="b", default="", help="comma-separated token ids of Bob")
    sample.add_argument("--eps", type=float, default=0.1)
    sample.add_argument("--trials", type=int, default=2000)
    sample.add_argument("--generator", "--gen", default="true-random")

    experiment = sub.add_parser("experiment", parents=[common], help="registered scenario sweep")
    experiment.add_argument("scenario", choices=Scenarios.ALL)
    experiment.add_argument("--config", help="key = value file")
    experiment.add_argument("--n", type=_int_list)
    experiment.add_argument("--k", type=_int_list)
    experiment.add_argument("--seeds", type=int)
    experiment.add_argument("--max-rounds", type=int)
    experiment.add_argument("--trials", type=int)
    experiment.add_argument("--eps", type=float)
    experiment.add_argument("--audit", action="store_true", default=None)
    return parser


async def _simulate(args) -> int:
    config = ExperimentConfig(
        scenario="simulate",
        kind=RunKind.SIMULATION,
        n=(args.n,),
        k=(args.k,),
        adversary=args.adversary,
        protocol=args.protocol,
        init=args.init,
        max_rounds=args.max_rounds,
        green_fraction=args.green_fraction,
        audit=args.audit,
        seed=args.seed,
        out_dir=args.out_dir,
    ).validate()
    report = await run_experiment(config, jobs=1)
    result = report.results[0]
    print(f"completion round: {result.row['completion_round']} | summary: {report.summary_path}")
    return report.exit_code


async def _offline(args) -> int:
    fm = create_file_manager(args.out_dir)
    fm.initialize()
    try:
        graphs = parse_graph_sequence(await fm.read_text(args.graphs))
    except OSError as e:
        raise ConfigError(f"cannot read graph-sequence file {args.graphs}: {e}") from e
    streams = SeedStreams(args.seed)
    if os.path.exists(args.init):
        init = parse_distribution(await fm.read_text(args.init))
    else:
        if args.k is None:
            raise ConfigError("--k is required when --init is a spec")
        init = init_distribution(parse_init_spec(args.init), graphs.n, args.k, streams.stream("init"))
    if init.n != graphs.n:
        raise ConfigError(f"distribution has {init.n} nodes, graph sequence has {graphs.n}")

    try:
        if args.mode == "multiport":
            plan = algorithm1(graphs, init, streams.stream("offline"), budget_const=args.budget_const)
        else:
            selection = "random" if args.mode == "broadcast" else "derandomize"
            plan = algorithm2(graphs, token_sources_of(init), streams.stream("offline"), selection=selection)
    except (ScheduleError, DerandomizationError) as e:
        logger.error(f"[_offline] {args.mode} failed | {e}")
        print(f"no schedule: {e}", file=sys.stderr)
        return 1

    schedule_path = await fm.write_text(args.out or fm.path("schedule.txt"), format_schedule(plan.schedule))
    verdict = validate_schedule(plan.schedule, graphs, init)
    row = {
        "run_id": f"offline-{args.mode}", "n": init.n, "k": init.k, "seed": args.seed,
        "mode": args.mode, "length": plan.schedule.length, "length_bound": plan.length_bound,
        "valid": verdict.ok,
        "phase_flows": ";".join(str(phase.flow_value) for phase in plan.phases),
        "phase_retries": ";".join(str(phase.retries) for phase in plan.phases),
        "selected": ";".join(str(v) for v in plan.selected),
    }
    await fm.write_csv(fm.path(Artifacts.SUMMARY), CsvColumns.OFFLINE_SUMMARY, [row])
    print(f"schedule length {plan.schedule.length} written to {schedule_path}")
    if args.validate and not verdict:
        print(f"invalid schedule: {verdict.violation.value} {verdict.detail}", file=sys.stderr)
        return 1
    return 0


def _token_set(k: int, text: str) -> TokenSet:
    try:
        return TokenSet.from_ids(k, (int(part) for part in text.split(",") if part.strip()))
    except ValueError as e:
        raise ConfigError(f"bad token list {text!r}: {e}") from e


async def _sample(args) -> int:
    if not 0 < args.eps < 1:
        raise ConfigError(f"eps must be in (0, 1), got {args.eps}")
    a, b = _token_set(args.k, args.a), _token_set(args.k, args.b)
    stats = sample_distribution(a, b, args.eps, parse_generator_spec(args.generator),
                                SeedStreams(args.seed), args.trials)
    fm = create_file_manager(args.out_dir)
    row = {
        "run_id": "sample", "k": args.k, "seed": args.seed,
        "a": ";".join(map(str, a)), "b": ";".join(map(str, b)),
        "eps": args.eps, "trials": stats.trials, "empty_verdicts": stats.empty_verdicts,
        "tv_distance": stats.tv_distance, "mean_bits": stats.mean_bits, "seed_bits": stats.seed_bits,
    }
    await fm.write_csv(fm.path(Artifacts.SUMMARY), CsvColumns.SAMPLE_SUMMARY, [row])
    await fm.write_csv(
        fm.path("histogram.csv"),
        CsvColumns.SAMPLE_HISTOGRAM,
        [{"token": t, "count": c, "frequency": c / stats.trials} for t, c in stats.histogram.items()],
    )
    print(f"tv distance {stats.tv_distance:.4f} | mean bits {stats.mean_bits:.1f}")
    return 0


async def _experiment(args) -> int:
    file_values = load_config_file(args.config) if args.config else {}
    overrides = {
        "n": args.n, "k": args.k, "seeds": args.seeds, "max_rounds": args.max_rounds,
        "trials": args.trials, "eps": args.eps, "audit": args.audit,
        "seed": args.seed, "out_dir": os.path.join(args.out_dir, args.scenario),
    }
    config = build_config(args.scenario, file_values, overrides)
    report = await run_experiment(config, jobs=args.jobs)
    print(f"{len(report.results)} runs, summary: {report.summary_path}")
    return report.exit_code


HANDLERS = {
    "simulate": _simulate,
    "offline": _offline,
    "sample": _sample,
    "experiment": _experiment,
}


async def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, set up logging and metrics, dispatch the subcommand."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, settings.LOGS_DIR)
    if args.metrics_port:
        start_metrics_server(args.metrics_port)

    try:
        return await HANDLERS[args.command](args)
    except GossipError as e:
        logger.error(f"[main] {args.command} rejected | {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
