"""Shared test fixtures for the k-gossip lab tests."""
import pytest

from app.adversaries.oblivious import oblivious_sequence, parse_family_spec
from app.config.settings import settings
from app.core.graphs import GraphSequence, RoundGraph
from app.core.rng import SeedStreams
from app.core.tokens import TokenDistribution


@pytest.fixture
def temp_dir(tmp_path):
    """Create a temporary directory for file operations."""
    return tmp_path


@pytest.fixture
def streams():
    """Seeded random streams shared by one test."""
    return SeedStreams(1234)


@pytest.fixture
def isolated_dirs(tmp_path, monkeypatch):
    """Point logs and results at the temporary directory."""
    monkeypatch.setattr(settings, "LOGS_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(settings, "OUT_DIR", str(tmp_path / "results"))
    return tmp_path


@pytest.fixture
def static_sequence():
    """Factory: the same round graph repeated `length` times."""
    def build(graph: RoundGraph, length: int) -> GraphSequence:
        return GraphSequence(graph.n, (graph,) * length)
    return build


@pytest.fixture
def random_sequence():
    """Factory: random connected rounds, reproducible per seed."""
    def build(n: int, length: int, seed: int, edge_prob: float = 0.1) -> GraphSequence:
        family = parse_family_spec(f"random:{edge_prob}")
        return oblivious_sequence(family, n, length, SeedStreams(seed).stream("graphs"))
    return build


@pytest.fixture
def singleton_dist():
    """Factory: token i at node i mod n."""
    def build(n: int, k: int) -> TokenDistribution:
        sets = [[t for t in range(k) if t % n == node] for node in range(n)]
        return TokenDistribution.from_sets(k, sets)
    return build
