import io
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from src.core.exceptions import SpectrumError
from src.danan.vibration import VibrationConfig
from src.qcore.state import ModeLabel
from src.utils.logging_config import get_danan_logger

logger = get_danan_logger()


@dataclass(frozen=True)
class SpectrumResult:
    """Two-sided periodogram, power_k = |X_k|^2 / N."""

    frequencies: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    peaks: Dict[ModeLabel, float]
    peak_bins: Dict[ModeLabel, int]
    noise_floor: float

    def peak_ratio(self, mirror: ModeLabel, reference: ModeLabel) -> float:
        return self.peaks[mirror] / self.peaks[reference]

    def to_csv(self) -> str:
        """Non-negative half of the spectrum as frequency,power rows."""
        buffer = io.StringIO()
        buffer.write("frequency,power\n")
        for frequency, power in zip(self.frequencies, self.power):
            if frequency >= 0:
                buffer.write(f"{float(frequency)!r},{float(power)!r}\n")
        return buffer.getvalue()


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def power_spectrum(series: np.ndarray, vib: VibrationConfig) -> SpectrumResult:
    series = np.asarray(series, dtype=np.float64)
    n = series.shape[0]
    if n != vib.n_frames:
        raise SpectrumError(f"Series has {n} frames, configuration expects {vib.n_frames}")
    if not is_power_of_two(n):
        raise SpectrumError(f"Frame count {n} is not a power of two")

    transform = np.fft.fft(series)
    power = np.abs(transform) ** 2 / n
    frequencies = np.fft.fftfreq(n, d=1.0 / vib.sample_rate)

    peak_bins = {mirror: int(round(frequency / vib.resolution)) for mirror, frequency in vib.frequencies.items()}
    peaks = {mirror: float(power[index]) for mirror, index in peak_bins.items()}
    noise_floor = float(np.median(power))

    logger.debug("power_spectrum", frames=n, noise_floor=noise_floor, peaks={str(k): v for k, v in peaks.items()})
    return SpectrumResult(
        frequencies=frequencies,
        power=power,
        peaks=peaks,
        peak_bins=peak_bins,
        noise_floor=noise_floor,
    )


def parseval_residual(series: np.ndarray, result: SpectrumResult) -> float:
    """Relative gap between sum(power) and sum(x^2)."""
    energy = float(np.sum(np.asarray(series, dtype=np.float64) ** 2))
    gap = abs(float(np.sum(result.power)) - energy)
    return gap / energy if energy > 0 else gap
