"""
Experiment configuration: scenario defaults, `key = value` files and flags.
"""
import logging
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple

from dotenv import dotenv_values

from app.adversaries import parse_adversary_spec
from app.adversaries.oblivious import parse_family_spec
from app.config.constants import Defaults, Scenarios
from app.config.settings import settings
from app.core.errors import ConfigError, GossipError
from app.core.tokens import parse_init_spec
from app.protocols.simulation import parse_protocol_spec
from app.sampling.generators import parse_generator_spec

logger = logging.getLogger(__name__)


class RunKind:
    SIMULATION = "simulation"
    MULTIPORT = "offline-multiport"
    BROADCAST = "offline-broadcast"
    SAMPLE = "sample"


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    kind: str
    n: Tuple[int, ...]
    k: Tuple[int, ...]
    paired: bool = False
    seeds: int = 1
    adversary: str = "random:0.05"
    protocol: str = "symdiff"
    init: str = "well-mixed:0.5"
    max_rounds: Optional[int] = None
    eps: float = Defaults.SAMPLE_EPS
    trials: int = Defaults.SAMPLE_TRIALS
    generator: str = "true-random"
    budget_const: int = Defaults.BUDGET_CONST
    green_fraction: float = Defaults.GREEN_FRACTION
    audit: bool = False
    selection: str = "random"
    timeout_expected: bool = False
    seed: int = 0
    out_dir: str = "results"

    def pairs(self) -> List[Tuple[int, int]]:
        if self.paired:
            return list(zip(self.n, self.k))
        return [(n, k) for n in self.n for k in self.k]

    def runs(self) -> List[Tuple[int, int, int]]:
        """(n, k, replicate) for every run, in summary order."""
        return [(n, k, rep) for n, k in self.pairs() for rep in range(self.seeds)]

    def validate(self) -> "ExperimentConfig":
        """Resolve every spec string; raise ConfigError on the first problem."""
        if not self.n or not self.k:
            raise ConfigError("n and k ranges must be non-empty")
        if any(v < 1 for v in self.n + self.k):
            raise ConfigError(f"n and k must be positive, got n={self.n} k={self.k}")
        if self.paired and len(self.n) != len(self.k):
            raise ConfigError(f"paired ranges differ in length: {len(self.n)} vs {len(self.k)}")
        if self.seeds < 1:
            raise ConfigError(f"seeds must be positive, got {self.seeds}")
        try:
            if self.kind == RunKind.SIMULATION:
                adversary = parse_adversary_spec(self.adversary)
                protocol = parse_protocol_spec(self.protocol)
                parse_init_spec(self.init)
                if adversary.strongly_adaptive and not protocol.broadcast:
                    raise ConfigError(f"{self.protocol} cannot run against {self.adversary}")
            elif self.kind in (RunKind.MULTIPORT, RunKind.BROADCAST):
                parse_family_spec(self.adversary)
                parse_init_spec(self.init)
                if self.selection not in ("random", "derandomize"):
                    raise ConfigError(f"unknown selection {self.selection!r}")
            elif self.kind == RunKind.SAMPLE:
                parse_generator_spec(self.generator)
                if not 0 < self.eps < 1:
                    raise ConfigError(f"eps must be in (0, 1), got {self.eps}")
                if self.trials < 1:
                    raise ConfigError(f"trials must be positive, got {self.trials}")
            else:
                raise ConfigError(f"unknown run kind {self.kind!r}")
        except ConfigError:
            raise
        except GossipError as e:
            raise ConfigError(str(e)) from e
        return self


SCENARIO_DEFAULTS: Dict[str, Dict[str, Any]] = {
    Scenarios.SYMDIFF_SCALING: dict(
        kind=RunKind.SIMULATION, n=(32, 64, 128), k=(32, 64, 128), paired=True, seeds=10,
        adversary="random:0.05", protocol="symdiff", init="well-mixed:0.5",
    ),
    Scenarios.STRONG_ADVERSARY: dict(
        kind=RunKind.SIMULATION, n=(128,), k=(16, 32, 64, 128), seeds=10,
        adversary="strong", protocol="bcast:random", init="well-mixed:0.75",
        max_rounds=Defaults.STRONG_MAX_ROUNDS, audit=True, timeout_expected=True,
    ),
    Scenarios.DET_SYMDIFF_LB: dict(
        kind=RunKind.SIMULATION, n=(10,), k=(5,), seeds=1,
        adversary="rotating-line", protocol="det-symdiff", init="all-at-one:0",
    ),
    Scenarios.OFFLINE_MULTIPORT: dict(
        kind=RunKind.MULTIPORT, n=(32,), k=(32,), seeds=20,
        adversary="random:0.1", init="singleton",
    ),
    Scenarios.OFFLINE_BROADCAST: dict(
        kind=RunKind.BROADCAST, n=(32, 64), k=(8, 16), paired=True, seeds=20,
        adversary="random:0.1", init="singleton",
    ),
    Scenarios.DERANDOMIZE: dict(
        kind=RunKind.BROADCAST, n=(32,), k=(8,), seeds=10,
        adversary="random:0.1", init="singleton", selection="derandomize",
    ),
    Scenarios.SAMPLE_DIST: dict(
        kind=RunKind.SAMPLE, n=(1,), k=(6,), seeds=50, eps=0.1, generator="true-random",
        trials=Defaults.SAMPLE_DIST_TRIALS,
    ),
}

_FIELD_NAMES = frozenset(f.name for f in fields(ExperimentConfig))
FILE_KEYS = (
    "n", "k", "paired", "seeds", "adversary", "protocol", "init", "max_rounds", "eps",
    "trials", "generator", "budget_const", "green_fraction", "audit", "selection",
)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_ints(text: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def coerce_value(key: str, raw: str) -> Any:
    """Convert a text value to the type of the ExperimentConfig field."""
    try:
        if key in ("n", "k"):
            return _parse_ints(raw)
        if key in ("paired", "audit"):
            return _parse_bool(raw)
        if key in ("seeds", "trials", "budget_const", "max_rounds"):
            return int(raw)
        if key in ("eps", "green_fraction"):
            return float(raw)
    except ValueError as e:
        raise ConfigError(f"bad value for {key}: {raw!r}") from e
    return raw.strip()


def load_config_file(path: str) -> Dict[str, Any]:
    """Read `key = value` lines; unknown keys are an error."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = dotenv_values(stream=handle)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    values = {}
    for key, value in raw.items():
        key = key.strip().lower()
        if key not in FILE_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        if value is None:
            raise ConfigError(f"config key {key!r} in {path} has no value")
        values[key] = coerce_value(key, value)
    logger.debug(f"[load_config_file] {path} | keys={sorted(values)}")
    return values


def build_config(
        scenario: str,
        file_values: Optional[Mapping[str, Any]] = None,
        overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentConfig:
    """Scenario defaults, then the config file, then command-line overrides."""
    if scenario not in SCENARIO_DEFAULTS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(Scenarios.ALL)}")
    config = ExperimentConfig(
        scenario=scenario,
        seed=settings.DEFAULT_SEED,
        out_dir=settings.OUT_DIR,
        green_fraction=settings.GREEN_FRACTION,
        budget_const=settings.ALG1_BUDGET_CONST,
        **SCENARIO_DEFAULTS[scenario],
    )
    for layer in (file_values or {}, overrides or {}):
        updates = {key: value for key, value in layer.items() if value is not None}
        unknown = set(updates) - _FIELD_NAMES
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        config = replace(config, **updates)
    return config.validate()
