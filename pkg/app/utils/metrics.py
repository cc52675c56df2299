"""
Prometheus metrics for simulations, schedulers and the sampling protocol.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

from prometheus_client import REGISTRY, Counter, Histogram, Info, start_http_server, write_to_textfile

logger = logging.getLogger(__name__)

# Lab info
LAB_INFO = Info('kgossip_lab', 'k-gossip lab information')

# Runs
RUNS_TOTAL = Counter(
    'kgossip_runs_total',
    'Total number of runs',
    ['scenario', 'status']
)

RUN_DURATION = Histogram(
    'kgossip_run_duration_seconds',
    'Run duration in seconds',
    ['scenario'],
    buckets=[0.01, 0.1, 0.5, 1, 5, 10, 30, 60, 300]
)

# Simulation
ROUNDS_TOTAL = Counter(
    'kgossip_rounds_total',
    'Total number of simulated rounds',
    ['protocol']
)

PROGRESS_TOTAL = Counter(
    'kgossip_progress_units_total',
    'Total progress units (tokens newly received)',
    ['protocol']
)

COMPLETION_ROUNDS = Histogram(
    'kgossip_completion_rounds',
    'Rounds until completion',
    ['protocol'],
    buckets=[10, 50, 100, 500, 1000, 5000, 10000, 50000]
)

# Offline schedulers
SCHEDULE_LENGTH = Histogram(
    'kgossip_schedule_length_rounds',
    'Length of emitted offline schedules',
    ['mode'],
    buckets=[10, 50, 100, 500, 1000, 5000, 10000]
)

FLOW_RETRIES = Counter(
    'kgossip_flow_retries_total',
    'Window doublings after a phase flow deficit',
    ['mode']
)

# Sampling
TRANSCRIPT_BITS = Histogram(
    'kgossip_transcript_bits',
    'Bits exchanged by one sampling protocol run (seed excluded)',
    buckets=[8, 16, 32, 64, 128, 256, 512, 1024]
)


def start_metrics_server(port: int = 8000):
    """Start the Prometheus metrics HTTP server."""
    try:
        start_http_server(port)
        logger.info(f"Metrics server started on port {port}")
    except Exception as e:
        logger.error(f"Failed to start metrics server: {e}")


def set_lab_info(version: str = "1.0.0", scenario: str = "adhoc"):
    """Set lab information."""
    LAB_INFO.info({
        'version': version,
        'scenario': scenario
    })


def record_run(scenario: str, success: bool, duration: float):
    """Record a finished run."""
    status = 'success' if success else 'failed'
    RUNS_TOTAL.labels(scenario=scenario, status=status).inc()
    RUN_DURATION.labels(scenario=scenario).observe(duration)


def record_round(protocol: str, progress: int):
    """Record one simulated round."""
    ROUNDS_TOTAL.labels(protocol=protocol).inc()
    if progress:
        PROGRESS_TOTAL.labels(protocol=protocol).inc(progress)


def record_completion(protocol: str, rounds: int):
    COMPLETION_ROUNDS.labels(protocol=protocol).observe(rounds)


def record_schedule(mode: str, length: int, retries: int = 0):
    """Record an emitted offline schedule."""
    SCHEDULE_LENGTH.labels(mode=mode).observe(length)
    if retries:
        FLOW_RETRIES.labels(mode=mode).inc(retries)


def record_transcript(bits: int):
    TRANSCRIPT_BITS.observe(bits)


@dataclass
class RunMetrics:
    """Observations of one run, shipped back from worker processes."""
    protocol: Optional[str] = None
    rounds: int = 0
    progress: int = 0
    completion_round: Optional[int] = None
    schedule_mode: Optional[str] = None
    schedule_length: int = 0
    flow_retries: int = 0
    transcript_bits: Dict[int, int] = field(default_factory=dict)  # bits -> runs


def record_run_metrics(metrics: RunMetrics):
    """Replay a worker's observations into this process's registry."""
    if metrics.protocol is not None:
        if metrics.rounds:
            ROUNDS_TOTAL.labels(protocol=metrics.protocol).inc(metrics.rounds)
        if metrics.progress:
            PROGRESS_TOTAL.labels(protocol=metrics.protocol).inc(metrics.progress)
        if metrics.completion_round is not None:
            record_completion(metrics.protocol, metrics.completion_round)
    if metrics.schedule_mode is not None:
        record_schedule(metrics.schedule_mode, metrics.schedule_length, metrics.flow_retries)
    for bits, count in metrics.transcript_bits.items():
        for _ in range(count):
            TRANSCRIPT_BITS.observe(bits)


def write_metrics_file(path: str):
    """Dump the registry in text exposition format."""
    try:
        write_to_textfile(path, REGISTRY)
        logger.info(f"Metrics written to {path}")
    except OSError as e:
        logger.error(f"Failed to write metrics file {path}: {e}")
