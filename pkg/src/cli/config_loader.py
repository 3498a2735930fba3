"""
Strict JSON configuration: network keys at the top level, one optional
block per experiment. Every error names the offending key and, where it
can be found, its line.
"""
import json
from math import asin
from typing import Any, Dict, NoReturn, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.core.exceptions import ConfigurationError
from src.danan.vibration import DEFAULT_FREQUENCIES, DEFAULT_TILT, VibrationConfig
from src.discrimination.povm import PovmMode
from src.interferometer.config import NestedMziConfig
from src.qcore.state import ModeLabel

# sin(theta) = 0.1, the weak-marker strength used throughout the reports
DEFAULT_WEAK_THETA = asin(0.1)


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class AccountingBlock(_Block):
    theta: float = Field(DEFAULT_WEAK_THETA, gt=0.0, description="Equal marker angle on A, B, C")
    trials: Optional[int] = Field(None, ge=1, description="Photons; DEFAULT_TRIALS when omitted")
    seed: Optional[int] = Field(None, ge=0, lt=2**64, description="RNG seed; DEFAULT_SEED when omitted")
    povm: PovmMode = Field(PovmMode.BASIS_CHECK, description="basis or idp")
    workers: Optional[int] = Field(None, ge=1, description="Worker threads; ACCOUNTING_WORKERS when omitted")


class FCheckBlock(_Block):
    theta: float = Field(DEFAULT_WEAK_THETA, ge=0.0, description="Equal marker angle on A and B")


class ConclusiveBlock(_Block):
    theta_weak: float = Field(DEFAULT_WEAK_THETA, ge=0.0, description="Weak marker angle on A and B")


class PhaseScanBlock(_Block):
    segment: ModeLabel = Field(ModeLabel.C, description="A, B or C")
    points: Optional[int] = Field(None, ge=2, description="Phase points; DEFAULT_SCAN_POINTS when omitted")


class SpectrumBlock(_Block):
    frequencies: Dict[ModeLabel, float] = Field(default_factory=lambda: dict(DEFAULT_FREQUENCIES))
    amplitudes: Dict[ModeLabel, float] = Field(
        default_factory=lambda: {mirror: DEFAULT_TILT for mirror in DEFAULT_FREQUENCIES}
    )
    sample_rate: float = Field(1024.0, gt=0.0)
    n_frames: int = Field(4096, ge=2)
    noise_amplitude: float = Field(1e-6, ge=0.0)
    seed: Optional[int] = Field(None, ge=0, lt=2**64)

    def to_vibration(self, network: NestedMziConfig, seed: Optional[int] = None) -> VibrationConfig:
        values = self.model_dump()
        if seed is not None:
            values["seed"] = seed
        return VibrationConfig(network=network, **values)


class ExperimentParameters(_Block):
    accounting: AccountingBlock = Field(default_factory=AccountingBlock)
    f_check: FCheckBlock = Field(default_factory=FCheckBlock)
    conclusive: ConclusiveBlock = Field(default_factory=ConclusiveBlock)
    phase_scan: PhaseScanBlock = Field(default_factory=PhaseScanBlock)
    spectrum: SpectrumBlock = Field(default_factory=SpectrumBlock)


EXPERIMENT_KEYS = tuple(ExperimentParameters.model_fields)


class LoadedConfig(BaseModel):
    network: NestedMziConfig = Field(default_factory=NestedMziConfig)
    experiments: ExperimentParameters = Field(default_factory=ExperimentParameters)


def _line_of(text: str, loc: Sequence[Any], value: Any) -> Optional[int]:
    """Best-effort line of an error: the bad string value, else the innermost key."""
    needles = []
    if isinstance(value, str):
        needles.append(json.dumps(value))
    needles += [json.dumps(part) for part in reversed(loc) if isinstance(part, str)]
    lines = text.splitlines()
    for needle in needles:
        for number, line in enumerate(lines, start=1):
            if needle in line:
                return number
    return None


def _raise_first(error: ValidationError, text: str) -> NoReturn:
    detail = error.errors()[0]
    loc = tuple(detail["loc"])
    key = ".".join(str(part) for part in loc) or None
    value = detail.get("input")
    shown = f" (got {value!r})" if isinstance(value, (str, int, float)) else ""
    raise ConfigurationError(
        f"{detail['msg']}{shown}",
        key=key,
        line=_line_of(text, loc, value),
    ) from error


def parse_config(text: str) -> LoadedConfig:
    """
    Parse a configuration document.

    ``{}`` (or blank text) yields the tuned default network and default
    experiment parameters.
    """
    if not text.strip():
        return LoadedConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"Malformed JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigurationError("Configuration must be a JSON object", line=1)

    experiment_data = {key: data.pop(key) for key in EXPERIMENT_KEYS if key in data}

    try:
        network = NestedMziConfig.model_validate(data)
    except ValidationError as exc:
        _raise_first(exc, text)
    try:
        experiments = ExperimentParameters.model_validate(experiment_data)
    except ValidationError as exc:
        _raise_first(exc, text)

    return LoadedConfig(network=network, experiments=experiments)


def load_config(path: Optional[str]) -> LoadedConfig:
    if path is None:
        return LoadedConfig()
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigurationError(f"Cannot read configuration: {exc.strerror}", key="--config") from exc
    return parse_config(text)
