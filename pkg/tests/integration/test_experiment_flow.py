"""Integration tests for experiment sweeps.

These tests run small scenarios end to end and check the CSV artifacts.
"""
import csv
import os

import pytest

from app.cli.config import build_config
from app.cli.experiment import run_experiment
from app.config.constants import Artifacts, CsvColumns, Scenarios
from app.core.file_manager import create_file_manager


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def _read_bytes(path):
    with open(path, "rb") as handle:
        return handle.read()


class TestSimulationSweep:
    """Integration tests for simulation scenarios."""

    @pytest.mark.asyncio
    async def test_symdiff_sweep_writes_artifacts(self, temp_dir):
        """Test summary, traces and metrics for a small symdiff sweep."""
        config = build_config(Scenarios.SYMDIFF_SCALING, overrides={
            "n": (8,), "k": (4,), "seeds": 2, "out_dir": str(temp_dir), "seed": 3,
        })
        report = await run_experiment(config)

        assert report.exit_code == 0
        rows = _read_rows(report.summary_path)
        assert [row["run_id"] for row in rows] == [
            "symdiff-scaling-n8-k4-r0", "symdiff-scaling-n8-k4-r1",
        ]
        assert list(rows[0]) == list(CsvColumns.SIMULATION_SUMMARY)
        assert all(row["timed_out"] == "0" for row in rows)

        for row in rows:
            trace = _read_rows(os.path.join(temp_dir, Artifacts.TRACES_DIR, f"{row['run_id']}.csv"))
            assert len(trace) == int(row["completion_round"])
            assert list(trace[0]) == list(CsvColumns.TRACE)
        assert os.path.exists(os.path.join(temp_dir, Artifacts.METRICS))

    @pytest.mark.asyncio
    async def test_rotating_line_lower_bound(self, temp_dir):
        """Test that det-symdiff needs many rounds on the rotating line."""
        config = build_config(Scenarios.DET_SYMDIFF_LB, overrides={"out_dir": str(temp_dir)})
        report = await run_experiment(config)

        row = _read_rows(report.summary_path)[0]
        assert row["timed_out"] == "0"
        assert int(row["completion_round"]) >= 25

    @pytest.mark.asyncio
    async def test_strong_adversary_timeout_is_expected(self, temp_dir):
        """Test that a strong-adversary timeout still counts as a successful run."""
        config = build_config(Scenarios.STRONG_ADVERSARY, overrides={
            "n": (8,), "k": (8,), "seeds": 1, "max_rounds": 20, "out_dir": str(temp_dir),
        })
        report = await run_experiment(config)

        assert report.exit_code == 0
        row = _read_rows(report.summary_path)[0]
        assert int(row["witness_violations"]) == 0

    @pytest.mark.asyncio
    async def test_timeout_fails_run(self, temp_dir):
        """Test that an unexpected timeout gives exit code 1."""
        config = build_config(Scenarios.SYMDIFF_SCALING, overrides={
            "n": (16,), "k": (16,), "seeds": 1, "max_rounds": 1, "out_dir": str(temp_dir),
        })
        report = await run_experiment(config)

        assert report.exit_code == 1
        assert _read_rows(report.summary_path)[0]["timed_out"] == "1"


class TestOfflineSweep:
    """Integration tests for offline scheduler scenarios."""

    @pytest.mark.asyncio
    async def test_multiport_sweep(self, temp_dir):
        """Test that generated multiport schedules validate."""
        config = build_config(Scenarios.OFFLINE_MULTIPORT, overrides={
            "n": (6,), "k": (3,), "seeds": 2, "budget_const": 2, "out_dir": str(temp_dir),
        })
        report = await run_experiment(config)

        rows = _read_rows(report.summary_path)
        assert list(rows[0]) == list(CsvColumns.OFFLINE_SUMMARY)
        assert all(row["valid"] == "1" and row["mode"] == "multiport" for row in rows)
        assert all(len(row["phase_flows"].split(";")) == 3 for row in rows)

    @pytest.mark.asyncio
    async def test_derandomized_broadcast(self, temp_dir):
        """Test broadcast schedules with a derandomized gather set."""
        config = build_config(Scenarios.DERANDOMIZE, overrides={
            "n": (8,), "k": (4,), "seeds": 1, "out_dir": str(temp_dir),
        })
        report = await run_experiment(config)

        row = _read_rows(report.summary_path)[0]
        assert report.exit_code == 0
        assert row["mode"] == "broadcast-derandomized"
        assert row["valid"] == "1"
        assert int(row["length"]) <= int(row["length_bound"])


class TestSampleSweep:
    """Integration tests for the sampling scenario."""

    @pytest.mark.asyncio
    async def test_sample_dist(self, temp_dir):
        """Test summary rows and per-run histograms."""
        config = build_config(Scenarios.SAMPLE_DIST, overrides={
            "seeds": 2, "trials": 40, "out_dir": str(temp_dir),
        })
        report = await run_experiment(config)

        rows = _read_rows(report.summary_path)
        assert len(rows) == 2
        for row in rows:
            assert int(row["trials"]) == 40
            assert 0.0 <= float(row["tv_distance"]) <= 1.0
            histogram = _read_rows(os.path.join(temp_dir, Artifacts.TRACES_DIR, f"{row['run_id']}.csv"))
            assert set(int(h["token"]) for h in histogram) <= set(int(t) for t in (row["a"] + ";" + row["b"]).split(";") if t)

    @pytest.mark.asyncio
    async def test_sample_dist_within_eps(self, temp_dir):
        """Test that a well-sampled pair passes the eps distance check."""
        config = build_config(Scenarios.SAMPLE_DIST, overrides={
            "seeds": 1, "trials": 3000, "out_dir": str(temp_dir),
        })
        report = await run_experiment(config)

        assert report.exit_code == 0
        assert float(_read_rows(report.summary_path)[0]["tv_distance"]) <= 0.1


class TestDeterminism:
    """Integration tests for reproducible artifacts."""

    @pytest.mark.asyncio
    async def test_same_seed_same_bytes(self, temp_dir):
        """Test that equal configs write byte-identical summaries and traces."""
        paths = []
        for name in ("first", "second"):
            out_dir = str(temp_dir / name)
            config = build_config(Scenarios.SYMDIFF_SCALING, overrides={
                "n": (8,), "k": (6,), "seeds": 2, "seed": 11, "out_dir": out_dir,
            })
            await run_experiment(config, file_manager=create_file_manager(out_dir))
            paths.append(out_dir)

        first, second = paths
        assert _read_bytes(os.path.join(first, Artifacts.SUMMARY)) == \
            _read_bytes(os.path.join(second, Artifacts.SUMMARY))
        for trace in os.listdir(os.path.join(first, Artifacts.TRACES_DIR)):
            assert _read_bytes(os.path.join(first, Artifacts.TRACES_DIR, trace)) == \
                _read_bytes(os.path.join(second, Artifacts.TRACES_DIR, trace))

    @pytest.mark.asyncio
    async def test_worker_processes_match_serial(self, temp_dir):
        """Test that a parallel sweep writes the serial summary."""
        summaries = []
        for jobs in (1, 2):
            out_dir = str(temp_dir / f"jobs{jobs}")
            config = build_config(Scenarios.SYMDIFF_SCALING, overrides={
                "n": (6,), "k": (4,), "seeds": 3, "seed": 5, "out_dir": out_dir,
            })
            report = await run_experiment(config, jobs=jobs)
            summaries.append(_read_bytes(report.summary_path))

        assert summaries[0] == summaries[1]
