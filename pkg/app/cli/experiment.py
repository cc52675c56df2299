"""
Experiment sweeps: run every (n, k, replicate) and write the CSV artifacts.
"""
import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

from app.cli.config import ExperimentConfig
from app.cli.scenarios import RunResult, run_one, summary_columns
from app.config.constants import Artifacts
from app.core.file_manager import FileManager, create_file_manager
from app.utils.metrics import record_run, record_run_metrics, set_lab_info, write_metrics_file

logger = logging.getLogger(__name__)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    results: List[RunResult]
    summary_path: str

    @property
    def all_ok(self) -> bool:
        return all(result.success for result in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_ok else 1


async def run_experiment(
        config: ExperimentConfig,
        jobs: int = 1,
        file_manager: Optional[FileManager] = None,
) -> ExperimentReport:
    """Run the sweep and write summary.csv, traces/<run>.csv and metrics.prom.

    Args:
        config: Validated experiment configuration
        jobs: Worker processes; 1 keeps runs in the default executor
        file_manager: Output location, defaults to config.out_dir

    Returns:
        ExperimentReport with one result per run in summary order
    """
    config.validate()
    fm = file_manager or create_file_manager(config.out_dir)
    fm.initialize()
    set_lab_info(scenario=config.scenario)

    runs = config.runs()
    logger.info(f"[run_experiment] {config.scenario} | runs={len(runs)} jobs={jobs} seed={config.seed}")

    loop = asyncio.get_running_loop()
    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        futures = [loop.run_in_executor(executor, run_one, config, n, k, rep) for n, k, rep in runs]
        results = await asyncio.gather(*futures)
    finally:
        if executor is not None:
            executor.shutdown()

    for result in results:
        record_run(config.scenario, result.success, result.duration)
        if executor is not None:
            # workers recorded into their own registries
            record_run_metrics(result.metrics)
        if result.trace_columns:
            await fm.write_csv(fm.trace_path(result.run_id), result.trace_columns, result.trace_rows)

    summary_path = await fm.write_csv(
        fm.path(Artifacts.SUMMARY),
        summary_columns(config),
        [result.row for result in results],
    )
    write_metrics_file(fm.path(Artifacts.METRICS))

    report = ExperimentReport(config, list(results), summary_path)
    failed = sum(1 for result in results if not result.success)
    logger.info(f"[run_experiment] {config.scenario} done | ok={len(results) - failed} failed={failed}")
    return report
