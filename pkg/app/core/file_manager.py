"""
File management for experiment inputs and artifacts.
"""
import csv
import io
import logging
import os
from typing import Any, Dict, Iterable, Sequence

import aiofiles
import aiofiles.os

from app.config.constants import Artifacts

logger = logging.getLogger(__name__)


def render_csv(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    """Render rows with a fixed column order and '\\n' line endings."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n",
                            extrasaction="raise")
    writer.writeheader()
    for row in rows:
        writer.writerow({column: _cell(row.get(column)) for column in columns})
    return buffer.getvalue()


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


class FileManager:
    """Manages the output directory of a run or sweep."""

    def __init__(self, out_dir: str):
        """Initialize FileManager with an output directory.

        Args:
            out_dir: Directory receiving CSV, schedule and metrics artifacts.
                     Directory is NOT created automatically - call initialize().
        """
        self.out_dir = out_dir
        self._initialized = False

    def initialize(self) -> None:
        """Create the output directory and its traces subdirectory."""
        if not self._initialized:
            os.makedirs(os.path.join(self.out_dir, Artifacts.TRACES_DIR), exist_ok=True)
            logger.debug(f"Output directory ensured: {self.out_dir}")
            self._initialized = True

    def path(self, *parts: str) -> str:
        self.initialize()
        return os.path.join(self.out_dir, *parts)

    def trace_path(self, run_id: str) -> str:
        return self.path(Artifacts.TRACES_DIR, f"{run_id}.csv")

    async def write_text(self, file_path: str, content: str) -> str:
        """Write text content, creating parent directories. Returns the path."""
        try:
            parent = os.path.dirname(file_path)
            if parent:
                await aiofiles.os.makedirs(parent, exist_ok=True)
            async with aiofiles.open(file_path, "w", encoding="utf-8", newline="") as handle:
                await handle.write(content)
            logger.debug(f"Wrote {len(content)} chars to {file_path}")
            return file_path
        except OSError as e:
            logger.error(f"Failed to write {file_path}: {e}")
            raise

    async def write_csv(
            self,
            file_path: str,
            columns: Sequence[str],
            rows: Iterable[Dict[str, Any]],
    ) -> str:
        return await self.write_text(file_path, render_csv(columns, rows))

    async def read_text(self, file_path: str) -> str:
        try:
            async with aiofiles.open(file_path, "r", encoding="utf-8") as handle:
                return await handle.read()
        except OSError as e:
            logger.error(f"Failed to read {file_path}: {e}")
            raise


def create_file_manager(out_dir: str) -> FileManager:
    """Create a new FileManager instance for a specific output directory.

    Args:
        out_dir: Path to the output directory

    Returns:
        New FileManager instance (not initialized - call initialize() when ready)
    """
    return FileManager(out_dir)
