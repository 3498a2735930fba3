"""
Frequency-tagged mirrors and the post-selected quad-cell signal.

Each mirror X tilts as delta_X * sin(2 pi f_X t). To first order the
difference signal at D picks up every tilt weighted by Re(w_X), the weak
value of segment X for post-selection at D.
"""
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.analysis.weak_values import weak_value
from src.config.settings import get_settings
from src.core.exceptions import SpectrumError
from src.interferometer.config import MARKABLE_SEGMENTS, NestedMziConfig
from src.qcore.state import ModeLabel
from src.utils.logging_config import get_danan_logger

logger = get_danan_logger()

L = ModeLabel

MAX_TILT = 0.05

DEFAULT_FREQUENCIES = {L.A: 30.0, L.B: 32.0, L.C: 34.0, L.E: 36.0, L.F: 38.0}
DEFAULT_TILT = 0.01


class VibrationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    frequencies: Dict[ModeLabel, float] = Field(
        default_factory=lambda: dict(DEFAULT_FREQUENCIES), description="Vibration frequency per mirror (Hz)"
    )
    amplitudes: Dict[ModeLabel, float] = Field(
        default_factory=lambda: {mirror: DEFAULT_TILT for mirror in DEFAULT_FREQUENCIES},
        description="First-order tilt delta per mirror",
    )
    sample_rate: float = Field(1024.0, gt=0.0, description="Frames per second")
    n_frames: int = Field(4096, ge=2, description="Frames recorded")
    noise_amplitude: float = Field(1e-6, ge=0.0, description="Standard deviation of additive detector noise")
    seed: Optional[int] = Field(None, ge=0, lt=2**64, description="Noise seed; DEFAULT_SEED when omitted")
    network: NestedMziConfig = Field(default_factory=NestedMziConfig, description="Marker-free interferometer")

    @field_validator('frequencies', 'amplitudes')
    def validate_mirrors(cls, v):
        for mirror in v:
            if mirror not in MARKABLE_SEGMENTS:
                raise ValueError(f"No vibrating mirror on {mirror}; mirrors sit on {[str(s) for s in MARKABLE_SEGMENTS]}")
        return v

    @property
    def nyquist(self) -> float:
        return self.sample_rate / 2

    @property
    def resolution(self) -> float:
        return self.sample_rate / self.n_frames

    def tilt(self, mirror: ModeLabel) -> float:
        return self.amplitudes.get(mirror, 0.0)

    def with_tilt(self, scale: float) -> "VibrationConfig":
        return VibrationConfig.model_validate({
            **self.model_dump(),
            "amplitudes": {mirror: delta * scale for mirror, delta in self.amplitudes.items()},
        })


def check_regime(vib: VibrationConfig) -> None:
    """Distinct tones below Nyquist and tilts small enough for the first-order model."""
    missing = sorted(str(m) for m in vib.amplitudes if m not in vib.frequencies)
    if missing:
        raise SpectrumError(f"Mirrors {missing} have a tilt but no frequency")

    bins = {}
    for mirror, frequency in vib.frequencies.items():
        if not 0.0 < frequency < vib.nyquist:
            raise SpectrumError(f"Mirror {mirror} frequency {frequency} Hz must lie in (0, {vib.nyquist}) Hz")
        index = int(round(frequency / vib.resolution))
        if index in bins:
            raise SpectrumError(f"Mirrors {bins[index]} and {mirror} share the {frequency} Hz bin")
        bins[index] = mirror

    for mirror, delta in vib.amplitudes.items():
        if not 0.0 <= delta <= MAX_TILT:
            raise SpectrumError(f"Tilt of mirror {mirror} is {delta}; the first-order model needs 0 <= delta <= {MAX_TILT}")


def mirror_weights(vib: VibrationConfig) -> Dict[ModeLabel, float]:
    return {mirror: weak_value(vib.network, mirror, L.D).real for mirror in vib.frequencies}


def simulate_quadcell_signal(vib: Optional[VibrationConfig] = None) -> np.ndarray:
    vib = vib or VibrationConfig()
    check_regime(vib)

    weights = mirror_weights(vib)
    times = np.arange(vib.n_frames) / vib.sample_rate
    signal = np.zeros(vib.n_frames)
    for mirror, frequency in vib.frequencies.items():
        signal += vib.tilt(mirror) * weights[mirror] * np.sin(2 * np.pi * frequency * times)

    if vib.noise_amplitude > 0:
        seed = vib.seed if vib.seed is not None else get_settings().DEFAULT_SEED
        signal += np.random.default_rng(seed).normal(0.0, vib.noise_amplitude, vib.n_frames)

    logger.debug("quadcell_signal", frames=vib.n_frames, weights={str(k): round(v, 12) for k, v in weights.items()})
    return signal
