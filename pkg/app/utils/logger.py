import logging
import os
import sys
from typing import Any, Dict, Optional

from app.config.constants import Artifacts

logger = logging.getLogger(__name__)


class RunAwareFormatter(logging.Formatter):
    """Prepends the run id when the record carries one."""

    def format(self, record):
        run_id = getattr(record, 'run_id', None)
        message = super().format(record)
        if run_id:
            message = f"[Run:{run_id}] {message}"
        return message


def setup_logging(level: str, logs_dir: str) -> None:
    """Configure root logging with a file and a stdout handler."""
    os.makedirs(logs_dir, exist_ok=True)
    formatter = RunAwareFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    file_handler = logging.FileHandler(os.path.join(logs_dir, Artifacts.LOG_FILE), encoding='utf-8')
    file_handler.setFormatter(formatter)

    stream_handler = logging.StreamHandler(sys.stdout)
    stream_handler.setFormatter(formatter)

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        handlers=[file_handler, stream_handler],
        force=True,
    )


class RunLogger:
    """Logger with run context."""

    @staticmethod
    def log_action(
            function_name: str,
            run_id: str,
            action: str,
            details: str = "",
            extra: Optional[Dict[str, Any]] = None
    ):
        """Log a run step with context."""
        message = f"[{function_name}] {action}"
        if details:
            message += f" | {details}"

        extra_data = extra or {}
        extra_data['run_id'] = run_id

        logger.info(message, extra=extra_data)

    @staticmethod
    def log_run_error(
            function_name: str,
            run_id: str,
            error_message: str,
            exc_info: bool = True,
    ):
        """Log run failures."""
        logger.error(f"[{function_name}] ERROR: {error_message}",
                     extra={'run_id': run_id}, exc_info=exc_info)

    @staticmethod
    def log_run_start(scenario: str, run_id: str, n: int, k: int, seed: int):
        """Log run start."""
        logger.info(f"RUN START | Scenario: {scenario} | n={n} k={k}", extra={
            'run_id': run_id,
            'seed': seed,
        })

    @staticmethod
    def log_run_complete(scenario: str, run_id: str, duration: float, success: bool = True):
        """Log run completion."""
        status = "SUCCESS" if success else "FAILED"
        logger.info(f"RUN {status} | Scenario: {scenario} | {duration:.2f}s", extra={
            'run_id': run_id,
            'duration': duration,
            'success': success,
        })


# Convenience instance
run_logger = RunLogger()
