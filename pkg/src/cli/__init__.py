from .commands import HANDLERS, dispatch
from .config_loader import ExperimentParameters, LoadedConfig, load_config, parse_config
from .parser import COMMANDS, FLAGS, RunSpec, build_parser, parse_run_spec

__all__ = [
    "COMMANDS",
    "ExperimentParameters",
    "FLAGS",
    "HANDLERS",
    "LoadedConfig",
    "RunSpec",
    "build_parser",
    "dispatch",
    "load_config",
    "parse_config",
    "parse_run_spec",
]
