from math import pi, sin
from typing import Dict, FrozenSet, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.qcore.state import ModeLabel

# Segments that can carry a marker or a blocker
MARKABLE_SEGMENTS = (ModeLabel.C, ModeLabel.E, ModeLabel.A, ModeLabel.B, ModeLabel.F)

# Segments that can carry a phase plate
PHASE_SEGMENTS = (ModeLabel.A, ModeLabel.B, ModeLabel.C)

# Open paths of the three-path argument
PATHS = (ModeLabel.A, ModeLabel.B, ModeLabel.C)


class MarkerSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    location: ModeLabel = Field(..., description="Segment carrying the marker (A, B, C, E or F)")
    theta: float = Field(..., ge=0.0, le=pi / 2, description="Coupling angle; epsilon = sin(theta)")

    @field_validator('location')
    def validate_location(cls, v):
        if v not in MARKABLE_SEGMENTS:
            raise ValueError(f"Marker location {v} is not a markable segment {[str(s) for s in MARKABLE_SEGMENTS]}")
        return v

    @property
    def epsilon(self) -> float:
        return sin(self.theta)


class NestedMziConfig(BaseModel):
    """
    Nested interferometer setup. The defaults are the tuned network: with no
    markers, phases or blocks nothing leaves BS3 toward F.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    t1: float = Field(1 / 3, ge=0.0, le=1.0, description="BS1 transmission S -> C")
    t2: float = Field(0.5, ge=0.0, le=1.0, description="BS2 transmission")
    t3: float = Field(0.5, ge=0.0, le=1.0, description="BS3 transmission")
    t4: float = Field(1 / 3, ge=0.0, le=1.0, description="BS4 transmission C -> D")
    phases: Dict[ModeLabel, float] = Field(default_factory=dict, description="Phase plates (radians) on A, B, C")
    blocked: FrozenSet[ModeLabel] = Field(default_factory=frozenset, description="Segments routed to an absorber")
    markers: Tuple[MarkerSpec, ...] = Field(default_factory=tuple, description="Weak path markers")

    @field_validator('phases')
    def validate_phase_segments(cls, v):
        for segment in v:
            if segment not in PHASE_SEGMENTS:
                raise ValueError(f"Phase plates are supported on A, B, C only, got {segment}")
        return v

    @field_validator('blocked')
    def validate_blocked_segments(cls, v):
        for segment in v:
            if segment not in MARKABLE_SEGMENTS:
                raise ValueError(f"Cannot block {segment}; blockable segments are {[str(s) for s in MARKABLE_SEGMENTS]}")
        return v

    @model_validator(mode='after')
    def validate_unique_markers(self):
        locations = [marker.location for marker in self.markers]
        duplicates = sorted({str(loc) for loc in locations if locations.count(loc) > 1})
        if duplicates:
            raise ValueError(f"Duplicate marker location(s): {duplicates}")
        return self

    @property
    def marker_free(self) -> bool:
        return not self.markers

    def marker_on(self, location: ModeLabel):
        for marker in self.markers:
            if marker.location == location:
                return marker
        return None

    def _replace(self, **changes) -> "NestedMziConfig":
        return NestedMziConfig.model_validate({**self.model_dump(), **changes})

    def with_markers(self, markers) -> "NestedMziConfig":
        return self._replace(markers=tuple(markers))

    def with_phase(self, segment: ModeLabel, phi: float) -> "NestedMziConfig":
        phases = dict(self.phases)
        phases[segment] = phi
        return self._replace(phases=phases)

    def with_blocked(self, blocked) -> "NestedMziConfig":
        return self._replace(blocked=frozenset(blocked))

    def without_markers(self) -> "NestedMziConfig":
        return self._replace(markers=())


def equal_markers(theta: float, locations=PATHS) -> Tuple[MarkerSpec, ...]:
    """Markers of the same strength on each of ``locations``."""
    return tuple(MarkerSpec(location=location, theta=theta) for location in locations)
