"""
Argument parsing for the experiment runner. Help text is generated from
``FLAGS`` so every accepted flag is documented.
"""
import argparse
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, ValidationError

from src.core.exceptions import ConfigurationError

COMMANDS: Dict[str, str] = {
    "run": "Port probabilities and, with markers, the weak-trace report",
    "phase-scan": "P(D) over a phase scan on one of A, B, C",
    "solo": "P(D) with only one path open",
    "argue": "Apply the exclusive-path criterion to A, B and C",
    "f-check": "Marker traces of photons reaching F",
    "conclusive": "Weak A/B traces split by a fully efficient C marker",
    "accounting": "Monte Carlo accounting of per-photon verdicts at D",
    "spectrum": "Frequency-tagged mirrors and the quad-cell power spectrum",
    "weak-values": "Weak values of every segment for a post-selected port",
    "trajectories": "Continuous trajectories and passage points per path",
}

ALL = tuple(COMMANDS)


@dataclass(frozen=True)
class FlagSpec:
    name: str
    help: str
    commands: Tuple[str, ...] = ALL
    options: Dict[str, Any] = field(default_factory=dict)


FLAGS: Tuple[FlagSpec, ...] = (
    FlagSpec("--config", "JSON configuration file (network plus experiment blocks)", options={"metavar": "PATH"}),
    FlagSpec("--out", "Write the report here instead of stdout", options={"metavar": "PATH"}),
    FlagSpec("--format", "Report format", options={"choices": ("json", "csv"), "default": "json"}),
    FlagSpec("--seed", "Unsigned 64-bit RNG seed", ("accounting", "spectrum"), {"type": int, "metavar": "U64"}),
    FlagSpec("--trials", "Photons to simulate", ("accounting",), {"type": int, "metavar": "N"}),
    FlagSpec("--segment", "Path carrying the phase plate or left open", ("phase-scan", "solo"), {"choices": ("A", "B", "C")}),
    FlagSpec("--points", "Phase points over [0, 2pi)", ("phase-scan", "argue"), {"type": int, "metavar": "N"}),
    FlagSpec(
        "--theta",
        "Marker angle in radians (equal markers on A, B, C; weak A/B markers for conclusive)",
        ("run", "f-check", "conclusive", "accounting"),
        {"type": float, "metavar": "FLOAT"},
    ),
    FlagSpec("--workers", "Worker threads for accounting blocks", ("accounting",), {"type": int, "metavar": "N"}),
    FlagSpec("--povm", "Discrimination POVM", ("accounting",), {"choices": ("basis", "idp")}),
    FlagSpec("--port", "Post-selection port", ("run", "weak-values"), {"choices": ("D", "O2", "O3"), "default": "D"}),
)


class RunSpec(BaseModel):
    command: str = Field(..., description="Subcommand")
    config_path: Optional[str] = Field(None, description="Configuration file")
    out: Optional[str] = Field(None, description="Report path; stdout when omitted")
    format: str = Field("json", description="json or csv")
    seed: Optional[int] = Field(None, ge=0, lt=2**64)
    trials: Optional[int] = Field(None, ge=1)
    segment: Optional[str] = None
    points: Optional[int] = Field(None, ge=2)
    theta: Optional[float] = None
    workers: Optional[int] = Field(None, ge=1)
    povm: Optional[str] = None
    port: str = "D"


class RunnerArgumentParser(argparse.ArgumentParser):
    """Usage errors exit 1 instead of argparse's 2, which is reserved for physics assertions."""

    def error(self, message):
        raise ConfigurationError(f"{self.prog}: {message}")


def flag_error(error: ValidationError) -> ConfigurationError:
    """First validation failure of a flag value, named by its flag."""
    detail = error.errors()[0]
    key = f"--{str(detail['loc'][-1]).replace('_', '-')}" if detail["loc"] else error.title
    shown = f" (got {detail['input']!r})" if "input" in detail else ""
    return ConfigurationError(f"{detail['msg']}{shown}", key=key)


def build_parser() -> argparse.ArgumentParser:
    parser = RunnerArgumentParser(
        prog="nested-mzi",
        description="Nested Mach-Zehnder weak-trace simulator",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=RunnerArgumentParser)
    for command, description in COMMANDS.items():
        sub = subparsers.add_parser(
            command,
            help=description,
            description=description,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        for flag in FLAGS:
            if command in flag.commands:
                sub.add_argument(flag.name, help=flag.help, **flag.options)
    return parser


def parse_run_spec(argv: Optional[Sequence[str]] = None) -> RunSpec:
    namespace = build_parser().parse_args(argv)
    values = vars(namespace)
    values["config_path"] = values.pop("config", None)
    try:
        return RunSpec(**values)
    except ValidationError as exc:
        raise flag_error(exc) from exc
