"""
Minimal pure-state engine: labeled mode registers, two-mode splitters,
marker couplings, conditioning and reduced marker states.
"""
from .operations import (
    ConditionalResult,
    apply_beam_splitter,
    apply_marker_coupling,
    apply_marker_operator,
    apply_phase_shift,
    condition_on_marker,
    condition_on_mode,
    marker_expectation,
    reduced_marker_state,
)
from .state import (
    TOLERANCE,
    UNDEFINED_PROBABILITY,
    JointState,
    MarkerId,
    ModeLabel,
    ReducedMarkerState,
    is_sink,
    is_terminal,
    sink_for,
)

__all__ = [
    "ConditionalResult",
    "JointState",
    "MarkerId",
    "ModeLabel",
    "ReducedMarkerState",
    "TOLERANCE",
    "UNDEFINED_PROBABILITY",
    "apply_beam_splitter",
    "apply_marker_coupling",
    "apply_marker_operator",
    "apply_phase_shift",
    "condition_on_marker",
    "condition_on_mode",
    "is_sink",
    "is_terminal",
    "marker_expectation",
    "reduced_marker_state",
    "sink_for",
]
