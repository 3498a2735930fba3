"""
Unitary elements, conditioning and partial traces on ``JointState``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.exceptions import MarkerError, StateError
from src.qcore.state import (
    TOLERANCE,
    UNDEFINED_PROBABILITY,
    JointState,
    MarkerId,
    ModeKey,
    ReducedMarkerState,
    is_terminal,
)
from src.utils.logging_config import get_engine_logger

logger = get_engine_logger()

MAX_MARKER_ANGLE = np.pi / 2


@dataclass(frozen=True)
class ConditionalResult:
    """Outcome of a post-selection: its probability and the renormalized state."""

    probability: float
    conditional: Optional[JointState]

    @property
    def defined(self) -> bool:
        return self.conditional is not None


def splitter_matrix(transmission: float) -> np.ndarray:
    """Real orthogonal [[sqrt(T), sqrt(1-T)], [sqrt(1-T), -sqrt(T)]]; an involution."""
    t = np.sqrt(transmission)
    r = np.sqrt(1.0 - transmission)
    return np.array([[t, r], [r, -t]], dtype=np.float64)


def marker_rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.float64)


def apply_beam_splitter(
    state: JointState,
    in1: ModeKey,
    in2: ModeKey,
    out1: ModeKey,
    out2: ModeKey,
    transmission: float,
) -> JointState:
    """
    Mix two input modes into two output modes.

    An unused (vacuum) input port is addressed by any label that is empty at
    this point. Output labels outside the input pair must be empty.
    """
    if str(in1) == str(in2):
        raise StateError(f"Splitter inputs must differ, got {in1} twice")
    if str(out1) == str(out2):
        raise StateError(f"Splitter outputs must differ, got {out1} twice")
    if not 0.0 <= transmission <= 1.0:
        raise StateError(f"Transmission must lie in [0, 1], got {transmission}")

    i1, i2 = state.index_of(in1), state.index_of(in2)
    o1, o2 = state.index_of(out1), state.index_of(out2)

    amplitudes = state.amplitudes
    for row in (o1, o2):
        if row not in (i1, i2) and np.any(np.abs(amplitudes[row]) > TOLERANCE):
            raise StateError(f"Output mode {state.modes[row]} is already populated")

    matrix = splitter_matrix(transmission)
    a1, a2 = amplitudes[i1], amplitudes[i2]

    new = np.array(amplitudes)
    new[i1] = 0.0
    new[i2] = 0.0
    new[o1] = matrix[0, 0] * a1 + matrix[0, 1] * a2
    new[o2] = matrix[1, 0] * a1 + matrix[1, 1] * a2
    return state.with_amplitudes(new)


def apply_phase_shift(state: JointState, segment: ModeKey, phi: float) -> JointState:
    if is_terminal(segment):
        raise StateError(f"Phase plates sit on segments, not on terminal port {segment}")
    row = state.index_of(segment)
    new = np.array(state.amplitudes)
    new[row] = new[row] * np.exp(1j * phi)
    return state.with_amplitudes(new)


def apply_marker_operator(
    state: JointState,
    marker: MarkerId,
    operator: np.ndarray,
    segment: Optional[ModeKey] = None,
    subnormalized: Optional[bool] = None,
) -> JointState:
    """
    Apply a 2x2 operator to one marker qubit.

    With ``segment`` the operator acts only on the photon-at-segment rows
    (a controlled coupling); otherwise it acts on every row.
    """
    axis = state.marker_axis(marker)
    operator = np.asarray(operator, dtype=np.complex128)
    if operator.shape != (2, 2):
        raise MarkerError(f"Marker operators are 2x2, got {operator.shape}")

    new = np.array(state.amplitudes)
    if segment is None:
        rotated = np.tensordot(operator, new, axes=([1], [axis]))
        new = np.moveaxis(rotated, 0, axis)
    else:
        row = state.index_of(segment)
        # row slice drops the mode axis, so marker axes shift down by one
        rotated = np.tensordot(operator, new[row], axes=([1], [axis - 1]))
        new[row] = np.moveaxis(rotated, 0, axis - 1)
    return state.with_amplitudes(new, subnormalized=subnormalized)


def apply_marker_coupling(state: JointState, segment: ModeKey, marker: MarkerId, theta: float) -> JointState:
    """
    Rotate the marker by theta when the photon is on ``segment``.

    Negative angles undo a coupling; |theta| = pi/2 is the fully efficient marker.
    """
    if marker.location != str(segment):
        raise MarkerError(f"Marker {marker} sits on {marker.location}, not on {segment}")
    if abs(theta) > MAX_MARKER_ANGLE + TOLERANCE:
        raise MarkerError(f"Marker angle must satisfy |theta| <= pi/2, got {theta}")
    return apply_marker_operator(state, marker, marker_rotation(theta), segment=segment)


def condition_on_mode(state: JointState, mode: ModeKey) -> ConditionalResult:
    """Post-select the photon on ``mode`` (SINK aggregates every absorber)."""
    rows = state.rows_for(mode)
    probability = state.mode_probability(mode)
    if probability < UNDEFINED_PROBABILITY:
        logger.debug("conditional_undefined", mode=str(mode), probability=probability)
        return ConditionalResult(probability=probability, conditional=None)

    mask = np.zeros(len(state.modes), dtype=bool)
    mask[list(rows)] = True
    new = np.where(mask.reshape((-1,) + (1,) * state.marker_count), state.amplitudes, 0.0)
    conditional = state.with_amplitudes(new / np.sqrt(probability), subnormalized=False)
    return ConditionalResult(probability=probability, conditional=conditional)


def condition_on_marker(state: JointState, marker: MarkerId, bit: int) -> ConditionalResult:
    """Post-select one marker qubit on |bit>."""
    projector = np.zeros((2, 2))
    projector[bit, bit] = 1.0
    projected = apply_marker_operator(state, marker, projector, subnormalized=True)
    probability = projected.norm()
    if probability < UNDEFINED_PROBABILITY:
        return ConditionalResult(probability=probability, conditional=None)
    return ConditionalResult(probability=probability, conditional=projected.normalized())


def marker_expectation(state: JointState, marker: MarkerId, operator: np.ndarray) -> float:
    """<psi| 1 (x) O_marker |psi>; real for Hermitian O."""
    applied = apply_marker_operator(state, marker, operator, subnormalized=True)
    return float(np.vdot(state.amplitudes, applied.amplitudes).real)


def reduced_marker_state(state: JointState, marker: MarkerId) -> ReducedMarkerState:
    """Partial trace over photon modes and every other marker."""
    if state.subnormalized or abs(state.norm() - 1.0) > TOLERANCE:
        raise StateError("Reduced states need a normalized input; renormalize conditionals first")
    axis = state.marker_axis(marker)
    psi = np.moveaxis(state.amplitudes, axis, -1).reshape(-1, 2)
    rho = psi.T @ psi.conj()
    return ReducedMarkerState(marker=marker, rho=rho)
