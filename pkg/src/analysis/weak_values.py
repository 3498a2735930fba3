"""
Weak values of segment projectors between the forward state and the
backward-evolved post-selected state.
"""
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.analysis.reports import ComplexValue, SliceWeakValues, WeakValueReport
from src.core.exceptions import ConfigurationError, PostselectionError
from src.interferometer.config import NestedMziConfig
from src.interferometer.network import STAGES, EvolutionResult, Stage, evolve, register_for
from src.qcore.state import UNDEFINED_PROBABILITY, JointState, ModeLabel
from src.utils.logging_config import get_analysis_logger

logger = get_analysis_logger()

L = ModeLabel

# Each slice is a complete cut through the network at one snapshot
SLICE_SEGMENTS: Dict[Stage, Tuple[ModeLabel, ...]] = {
    Stage.POST_BS1: (L.C, L.E),
    Stage.POST_MARKERS: (L.C, L.A, L.B),
    Stage.POST_BS3: (L.C, L.F, L.G),
}

POSTSELECTION_PORTS = (L.D, L.O2, L.O3)


# C crosses every slice; its single-segment value is read after the markers/phases
SEGMENT_SLICE: Dict[ModeLabel, Stage] = {
    L.E: Stage.POST_BS1,
    L.A: Stage.POST_MARKERS,
    L.B: Stage.POST_MARKERS,
    L.C: Stage.POST_MARKERS,
    L.F: Stage.POST_BS3,
    L.G: Stage.POST_BS3,
}


def slice_of(segment: ModeLabel) -> Stage:
    try:
        return SEGMENT_SLICE[segment]
    except KeyError:
        raise ConfigurationError(f"Segment {segment} has no weak-value slice", key="segment") from None


def _require_marker_free(config: NestedMziConfig) -> None:
    if not config.marker_free:
        raise ConfigurationError(
            "Weak values are defined on the marker-free network; remove the markers", key="markers"
        )


def _require_port(port: ModeLabel) -> None:
    if port not in POSTSELECTION_PORTS:
        raise ConfigurationError(
            f"Post-selection port must be one of {[str(p) for p in POSTSELECTION_PORTS]}, got {port}",
            key="port",
        )


def backward_state(evolution: EvolutionResult, register: Tuple[str, ...], port: ModeLabel, stage: Stage) -> JointState:
    """
    <Phi| at ``stage``: the basis state |port> pulled back through the adjoint
    of every element applied after that stage.
    """
    later = [element for element in evolution.elements if STAGES.index(element.stage) > STAGES.index(stage)]
    state = JointState.basis(register, port)
    for element in reversed(later):
        state = element.apply_adjoint(state)
    return state


def _weak_value(forward: JointState, backward: JointState, segment: ModeLabel) -> complex:
    total = backward.overlap(forward)
    if abs(total) ** 2 < UNDEFINED_PROBABILITY:
        raise PostselectionError(
            f"Post-selection probability {abs(total) ** 2:.3e} is zero; the weak value is undefined"
        )
    row = forward.index_of(segment)
    local = complex(np.vdot(backward.amplitudes[row], forward.amplitudes[row]))
    return local / total


def weak_value(
    config: Optional[NestedMziConfig],
    segment: ModeLabel,
    condition_port: ModeLabel = L.D,
) -> complex:
    """<Phi|P_segment|Psi> / <Phi|Psi> at the segment's slice."""
    config = config or NestedMziConfig()
    _require_marker_free(config)
    _require_port(condition_port)

    stage = slice_of(segment)
    evolution = evolve(config)
    forward = evolution.snapshot(stage)
    backward = backward_state(evolution, register_for(config), condition_port, stage)
    value = _weak_value(forward, backward, segment)

    logger.debug("weak_value", segment=str(segment), port=str(condition_port), re=value.real, im=value.imag)
    return value


def weak_value_report(config: Optional[NestedMziConfig] = None, condition_port: ModeLabel = L.D) -> WeakValueReport:
    config = config or NestedMziConfig()
    _require_marker_free(config)
    _require_port(condition_port)

    evolution = evolve(config)
    register = register_for(config)

    slices: List[SliceWeakValues] = []
    for stage, segments in SLICE_SEGMENTS.items():
        forward = evolution.snapshot(stage)
        backward = backward_state(evolution, register, condition_port, stage)
        values = {segment: _weak_value(forward, backward, segment) for segment in segments}
        slices.append(SliceWeakValues(
            stage=str(stage),
            values={segment: ComplexValue.of(value) for segment, value in values.items()},
            total=ComplexValue.of(sum(values.values())),
        ))

    logger.info("weak_value_report", port=str(condition_port), slices=len(slices))
    return WeakValueReport(condition_port=condition_port, slices=slices)
