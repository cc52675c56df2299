from app.cli.config import ExperimentConfig, RunKind, build_config, load_config_file
from app.cli.experiment import ExperimentReport, run_experiment
from app.cli.main import build_parser

__all__ = [
    'ExperimentConfig',
    'ExperimentReport',
    'RunKind',
    'build_config',
    'build_parser',
    'load_config_file',
    'run_experiment',
]
