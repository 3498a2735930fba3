"""
Nested Mach-Zehnder network: configuration, element list and evolution.
"""
from .config import MARKABLE_SEGMENTS, PATHS, PHASE_SEGMENTS, MarkerSpec, NestedMziConfig, equal_markers
from .network import (
    PORTS,
    STAGES,
    Element,
    ElementKind,
    EvolutionResult,
    Stage,
    build_nested_mzi,
    continuous_trajectories,
    evolve,
    port_probabilities,
)

__all__ = [
    "MARKABLE_SEGMENTS",
    "PATHS",
    "PHASE_SEGMENTS",
    "PORTS",
    "STAGES",
    "Element",
    "ElementKind",
    "EvolutionResult",
    "MarkerSpec",
    "NestedMziConfig",
    "Stage",
    "build_nested_mzi",
    "continuous_trajectories",
    "equal_markers",
    "evolve",
    "port_probabilities",
]
