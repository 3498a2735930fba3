"""
Frequency-tagging simulation: vibrating mirrors read out through the
post-selected quad-cell signal.
"""
from .spectrum import SpectrumResult, parseval_residual, power_spectrum
from .vibration import VibrationConfig, check_regime, mirror_weights, simulate_quadcell_signal

__all__ = [
    "SpectrumResult",
    "VibrationConfig",
    "check_regime",
    "mirror_weights",
    "parseval_residual",
    "power_spectrum",
    "simulate_quadcell_signal",
]
