"""
The nested interferometer as an ordered element list.

Sign convention (real orthogonal splitters, no explicit phase plates):
path amplitudes reaching D are +1/3 through C, -1/3 through A and +1/3
through B, and the inner interferometer is dark toward F.
"""
from dataclasses import dataclass
from enum import StrEnum
from typing import Dict, List, Optional, Tuple

from src.core.exceptions import ConfigurationError
from src.interferometer.config import NestedMziConfig
from src.qcore.operations import (
    apply_beam_splitter,
    apply_marker_coupling,
    apply_phase_shift,
    condition_on_mode,
)
from src.qcore.state import JointState, MarkerId, ModeLabel, sink_for
from src.utils.logging_config import get_network_logger

logger = get_network_logger()

L = ModeLabel

BASE_MODES = (L.S, L.C, L.E, L.A, L.B, L.F, L.G, L.D, L.O2, L.O3)
PORTS = (L.D, L.O2, L.O3, L.SINK)


class Stage(StrEnum):
    POST_BS1 = "post-BS1"
    POST_BS2 = "post-BS2"
    POST_MARKERS = "post-markers-phases"
    POST_BS3 = "post-BS3"
    POST_BS4 = "post-BS4"


STAGES = tuple(Stage)


class ElementKind(StrEnum):
    SPLITTER = "splitter"
    PHASE = "phase"
    MARKER = "marker"
    BLOCK = "block"
    EXIT = "exit"


@dataclass(frozen=True)
class Element:
    kind: ElementKind
    name: str
    stage: Stage
    modes: Tuple[str, ...]
    parameter: float = 0.0
    marker: Optional[MarkerId] = None

    def apply(self, state: JointState) -> JointState:
        if self.kind == ElementKind.PHASE:
            return apply_phase_shift(state, self.modes[0], self.parameter)
        if self.kind == ElementKind.MARKER:
            return apply_marker_coupling(state, self.modes[0], self.marker, self.parameter)
        in1, in2, out1, out2 = self.modes
        return apply_beam_splitter(state, in1, in2, out1, out2, self.parameter)

    def apply_adjoint(self, state: JointState) -> JointState:
        if self.kind == ElementKind.PHASE:
            return apply_phase_shift(state, self.modes[0], -self.parameter)
        if self.kind == ElementKind.MARKER:
            return apply_marker_coupling(state, self.modes[0], self.marker, -self.parameter)
        # splitter matrices are symmetric involutions: swap the port roles
        in1, in2, out1, out2 = self.modes
        return apply_beam_splitter(state, out1, out2, in1, in2, self.parameter)


def _splitter(name: str, stage: Stage, in1, in2, out1, out2, transmission: float) -> Element:
    return Element(
        kind=ElementKind.SPLITTER,
        name=name,
        stage=stage,
        modes=(str(in1), str(in2), str(out1), str(out2)),
        parameter=transmission,
    )


def _block(segment: ModeLabel, stage: Stage) -> Element:
    # T=0 swaps the segment with its own absorber
    return Element(
        kind=ElementKind.BLOCK,
        name=f"block-{segment}",
        stage=stage,
        modes=(str(segment), sink_for(segment), str(segment), sink_for(segment)),
        parameter=0.0,
    )


def marker_ids(config: NestedMziConfig) -> Tuple[MarkerId, ...]:
    return tuple(MarkerId(index=i, location=spec.location) for i, spec in enumerate(config.markers))


def register_for(config: NestedMziConfig) -> Tuple[str, ...]:
    sinks = tuple(sink_for(segment) for segment in BASE_MODES if segment in config.blocked)
    return tuple(str(mode) for mode in BASE_MODES) + sinks


def build_nested_mzi(config: NestedMziConfig) -> List[Element]:
    """
    Element order: BS1; E marker/block; BS2; phases and markers on A, B, C;
    blocks on A, B, C; BS3; F marker/block; G exit to O3; BS4.
    """
    for segment in config.blocked:
        if segment in (L.D, L.O2, L.O3, L.SINK):
            raise ConfigurationError(f"Cannot block terminal port {segment}", key="blocked")

    ids = {marker.location: marker for marker in marker_ids(config)}
    thetas = {spec.location: spec.theta for spec in config.markers}

    def marker_element(segment: ModeLabel, stage: Stage) -> List[Element]:
        if segment not in ids:
            return []
        return [Element(
            kind=ElementKind.MARKER,
            name=f"marker-{segment}",
            stage=stage,
            modes=(str(segment),),
            parameter=thetas[segment],
            marker=ids[segment],
        )]

    def block_element(segment: ModeLabel, stage: Stage) -> List[Element]:
        return [_block(segment, stage)] if segment in config.blocked else []

    elements: List[Element] = []

    # BS1: S plus a vacuum port (C is still empty) -> C, E
    elements.append(_splitter("BS1", Stage.POST_BS1, L.S, L.C, L.C, L.E, config.t1))
    elements += marker_element(L.E, Stage.POST_BS1)
    elements += block_element(L.E, Stage.POST_BS1)

    # BS2: vacuum port (B still empty) and E -> B, A; A picks up the minus sign
    elements.append(_splitter("BS2", Stage.POST_BS2, L.B, L.E, L.B, L.A, config.t2))

    for segment in (L.A, L.B, L.C):
        if segment in config.phases:
            elements.append(Element(
                kind=ElementKind.PHASE,
                name=f"phase-{segment}",
                stage=Stage.POST_MARKERS,
                modes=(str(segment),),
                parameter=config.phases[segment],
            ))
        elements += marker_element(segment, Stage.POST_MARKERS)
    for segment in (L.A, L.B, L.C):
        elements += block_element(segment, Stage.POST_MARKERS)

    elements.append(_splitter("BS3", Stage.POST_BS3, L.A, L.B, L.F, L.G, config.t3))
    elements += marker_element(L.F, Stage.POST_BS3)
    elements += block_element(L.F, Stage.POST_BS3)

    elements.append(Element(
        kind=ElementKind.EXIT,
        name="exit-G",
        stage=Stage.POST_BS4,
        modes=(str(L.G), str(L.O3), str(L.O3), str(L.G)),
        parameter=1.0,
    ))
    elements.append(_splitter("BS4", Stage.POST_BS4, L.C, L.F, L.D, L.O2, config.t4))

    logger.debug(
        "network_built",
        elements=len(elements),
        markers=len(config.markers),
        blocked=sorted(str(s) for s in config.blocked),
    )
    return elements


@dataclass(frozen=True)
class EvolutionResult:
    snapshots: Tuple[Tuple[Stage, JointState], ...]
    final: JointState
    elements: Tuple[Element, ...]

    def snapshot(self, stage: Stage) -> JointState:
        for label, state in self.snapshots:
            if label == stage:
                return state
        raise KeyError(stage)


def evolve(config: NestedMziConfig, elements: Optional[List[Element]] = None) -> EvolutionResult:
    """Run |S> (x) |0...0> through the element list, recording a snapshot after each stage."""
    elements = elements if elements is not None else build_nested_mzi(config)
    state = JointState.source(register_for(config), marker_ids(config))

    snapshots = []
    for stage in STAGES:
        for element in elements:
            if element.stage == stage:
                state = element.apply(state)
        snapshots.append((stage, state))

    return EvolutionResult(snapshots=tuple(snapshots), final=state, elements=tuple(elements))


def port_probabilities(config: NestedMziConfig) -> Dict[ModeLabel, float]:
    final = evolve(config).final
    probabilities = {port: condition_on_mode(final, port).probability for port in PORTS}
    logger.debug("port_probabilities", **{str(k): round(v, 12) for k, v in probabilities.items()})
    return probabilities


# Photon trajectories of the network graph, segment -> next segments
NETWORK_GRAPH: Dict[ModeLabel, Tuple[ModeLabel, ...]] = {
    L.S: (L.C, L.E),
    L.E: (L.A, L.B),
    L.A: (L.F, L.G),
    L.B: (L.F, L.G),
    L.C: (L.D, L.O2),
    L.F: (L.D, L.O2),
    L.G: (L.O3,),
}


def continuous_trajectories(config: Optional[NestedMziConfig] = None, target: ModeLabel = L.D) -> List[Tuple[ModeLabel, ...]]:
    """Every S -> target walk along open segments, in deterministic order."""
    blocked = config.blocked if config is not None else frozenset()
    trajectories: List[Tuple[ModeLabel, ...]] = []

    def walk(path: Tuple[ModeLabel, ...]) -> None:
        node = path[-1]
        if node == target:
            trajectories.append(path)
            return
        for nxt in NETWORK_GRAPH.get(node, ()):
            if nxt not in blocked:
                walk(path + (nxt,))

    walk((L.S,))
    return trajectories
