"""
Joint photon/marker pure states.

A ``JointState`` is a dense complex tensor with one axis over the photon's
mode register and one two-level axis per marker qubit, in marker order.
Instances are immutable; every operation in ``src.qcore.operations``
returns a new state.
"""
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import product
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.exceptions import MarkerError, StateError, UnknownModeError

TOLERANCE = 1e-12
UNDEFINED_PROBABILITY = 1e-14

# Basis coefficients are complex128; re/im are the amplitude's two real fields.
Amplitude = complex


class ModeLabel(StrEnum):
    S = "S"
    C = "C"
    E = "E"
    A = "A"
    B = "B"
    F = "F"
    G = "G"
    D = "D"
    O2 = "O2"
    O3 = "O3"
    SINK = "SINK"


TERMINAL_MODES = frozenset({ModeLabel.D, ModeLabel.O2, ModeLabel.O3, ModeLabel.SINK})
SINK_PREFIX = "SINK."

ModeKey = Union[ModeLabel, str]


def sink_for(segment: ModeKey) -> str:
    """Absorber mode that swallows the flux of a blocked segment."""
    return f"{SINK_PREFIX}{segment}"


def is_sink(mode: ModeKey) -> bool:
    return str(mode) == ModeLabel.SINK or str(mode).startswith(SINK_PREFIX)


def is_terminal(mode: ModeKey) -> bool:
    return is_sink(mode) or str(mode) in TERMINAL_MODES


@dataclass(frozen=True, order=True)
class MarkerId:
    index: int
    location: ModeLabel

    def __str__(self) -> str:
        return f"m{self.index}@{self.location}"


@dataclass(frozen=True)
class JointState:
    modes: Tuple[str, ...]
    markers: Tuple[MarkerId, ...]
    amplitudes: np.ndarray = field(repr=False)
    subnormalized: bool = False

    def __post_init__(self):
        if len(set(self.modes)) != len(self.modes):
            raise StateError(f"Mode labels must be unique within a register: {self.modes}")
        locations = [marker.location for marker in self.markers]
        if len(set(locations)) != len(locations):
            raise MarkerError(f"At most one marker per segment, got {locations}")

        expected_shape = (len(self.modes),) + (2,) * len(self.markers)
        amplitudes = np.array(self.amplitudes, dtype=np.complex128)
        if amplitudes.shape != expected_shape:
            raise StateError(f"Amplitude tensor has shape {amplitudes.shape}, expected {expected_shape}")
        if not np.all(np.isfinite(amplitudes)):
            raise StateError("Amplitudes must be finite")

        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)

        if not self.subnormalized and abs(self.norm() - 1.0) > TOLERANCE:
            raise StateError(f"State norm {self.norm():.15f} deviates from 1 beyond {TOLERANCE}")

    @classmethod
    def source(cls, modes: Sequence[str], markers: Sequence[MarkerId] = ()) -> "JointState":
        """|S> tensored with every marker in its ground state."""
        modes = tuple(str(mode) for mode in modes)
        if ModeLabel.S not in modes:
            raise UnknownModeError("Register has no source mode S")
        amplitudes = np.zeros((len(modes),) + (2,) * len(markers), dtype=np.complex128)
        amplitudes[(modes.index(ModeLabel.S),) + (0,) * len(markers)] = 1.0
        return cls(modes=modes, markers=tuple(markers), amplitudes=amplitudes)

    @classmethod
    def basis(cls, modes: Sequence[str], mode: ModeKey, markers: Sequence[MarkerId] = ()) -> "JointState":
        modes = tuple(str(m) for m in modes)
        if str(mode) not in modes:
            raise UnknownModeError(f"Unknown mode: {mode}")
        amplitudes = np.zeros((len(modes),) + (2,) * len(markers), dtype=np.complex128)
        amplitudes[(modes.index(str(mode)),) + (0,) * len(markers)] = 1.0
        return cls(modes=modes, markers=tuple(markers), amplitudes=amplitudes)

    @property
    def marker_count(self) -> int:
        return len(self.markers)

    @property
    def dimension(self) -> int:
        return len(self.modes) * 2 ** len(self.markers)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def index_of(self, mode: ModeKey) -> int:
        try:
            return self.modes.index(str(mode))
        except ValueError:
            raise UnknownModeError(f"Unknown mode: {mode}") from None

    def rows_for(self, mode: ModeKey) -> Tuple[int, ...]:
        """Register rows addressed by a label; SINK addresses every absorber."""
        if str(mode) == ModeLabel.SINK:
            return tuple(i for i, m in enumerate(self.modes) if is_sink(m))
        return (self.index_of(mode),)

    def marker_axis(self, marker: MarkerId) -> int:
        try:
            return 1 + self.markers.index(marker)
        except ValueError:
            raise MarkerError(f"Unknown marker: {marker}") from None

    def marker_at(self, location: ModeKey) -> MarkerId:
        for marker in self.markers:
            if marker.location == str(location):
                return marker
        raise MarkerError(f"No marker placed on segment {location}")

    def amplitude(self, mode: ModeKey, bits: Union[str, Sequence[int]] = "") -> Amplitude:
        bits = tuple(int(b) for b in bits) if bits else (0,) * self.marker_count
        if len(bits) != self.marker_count:
            raise MarkerError(f"Bit string length {len(bits)} != marker count {self.marker_count}")
        return complex(self.amplitudes[(self.index_of(mode),) + bits])

    def mode_probability(self, mode: ModeKey) -> float:
        rows = self.rows_for(mode)
        if not rows:
            return 0.0
        return float(np.sum(np.abs(self.amplitudes[list(rows)]) ** 2))

    def with_amplitudes(self, amplitudes: np.ndarray, subnormalized: Optional[bool] = None) -> "JointState":
        return JointState(
            modes=self.modes,
            markers=self.markers,
            amplitudes=amplitudes,
            subnormalized=self.subnormalized if subnormalized is None else subnormalized,
        )

    def normalized(self) -> "JointState":
        norm = self.norm()
        if norm < UNDEFINED_PROBABILITY:
            raise StateError("Cannot renormalize a state with vanishing norm")
        return self.with_amplitudes(self.amplitudes / np.sqrt(norm), subnormalized=False)

    def overlap(self, other: "JointState") -> complex:
        """<self|other>."""
        if self.modes != other.modes or self.markers != other.markers:
            raise StateError("Overlap requires identical registers")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "JointState") -> float:
        return abs(self.overlap(other)) ** 2

    def as_dict(self, threshold: float = 0.0) -> Dict[Tuple[str, str], Amplitude]:
        """Map (mode, marker bitstring) -> amplitude."""
        entries = {}
        for row, mode in enumerate(self.modes):
            for bits in product((0, 1), repeat=self.marker_count):
                value = complex(self.amplitudes[(row,) + bits])
                if abs(value) > threshold:
                    entries[(mode, "".join(str(b) for b in bits))] = value
        return entries

    def marker_populations(self) -> Dict[str, float]:
        """Probability of each marker bitstring, summed over photon modes."""
        weights = np.sum(np.abs(self.amplitudes) ** 2, axis=0)
        return {
            "".join(str(b) for b in bits): float(weights[bits])
            for bits in product((0, 1), repeat=self.marker_count)
        }


@dataclass(frozen=True)
class ReducedMarkerState:
    marker: MarkerId
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.rho, dtype=np.complex128)
        if rho.shape != (2, 2):
            raise StateError(f"Reduced marker state must be 2x2, got {rho.shape}")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @property
    def excitation_probability(self) -> float:
        return float(np.clip(self.rho[1, 1].real, 0.0, 1.0))

    @property
    def fidelity_to_ground(self) -> float:
        """sqrt(<0|rho|0>), so excitation = 1 - fidelity**2."""
        return float(np.sqrt(np.clip(self.rho[0, 0].real, 0.0, 1.0)))

    def is_valid(self, tol: float = TOLERANCE) -> bool:
        hermitian = np.allclose(self.rho, self.rho.conj().T, atol=tol, rtol=0.0)
        unit_trace = abs(np.trace(self.rho) - 1.0) <= tol
        positive = bool(np.min(np.linalg.eigvalsh((self.rho + self.rho.conj().T) / 2)) >= -tol)
        return hermitian and unit_trace and positive

