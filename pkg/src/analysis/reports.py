from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.qcore.state import ModeLabel


class ComplexValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    re: float = Field(..., description="Real part")
    im: float = Field(..., description="Imaginary part")

    @classmethod
    def of(cls, value: complex) -> "ComplexValue":
        return cls(re=float(value.real), im=float(value.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class MarkerTrace(BaseModel):
    location: ModeLabel = Field(..., description="Segment carrying the marker")
    theta: float = Field(..., description="Coupling angle (radians)")
    epsilon: float = Field(..., description="sin(theta)")
    excitation_probability: float = Field(..., ge=0.0, le=1.0, description="<1|rho|1> given the condition port")
    fidelity_to_ground: float = Field(..., ge=0.0, le=1.0, description="sqrt(<0|rho|0>) given the condition port")


class TraceReport(BaseModel):
    condition_port: ModeLabel = Field(..., description="Detection port conditioned on")
    port_probability: float = Field(..., description="Probability of the condition port")
    markers: List[MarkerTrace] = Field(default_factory=list, description="Per-marker weak traces")

    class Config:
        json_schema_extra = {
            "example": {
                "condition_port": "D",
                "port_probability": 0.11333333333333334,
                "markers": [
                    {"location": "A", "theta": 0.1001674211615598, "epsilon": 0.1,
                     "excitation_probability": 0.00980392156862745, "fidelity_to_ground": 0.9950860}
                ],
            }
        }

    def trace(self, location: ModeLabel) -> MarkerTrace:
        for marker in self.markers:
            if marker.location == location:
                return marker
        raise KeyError(location)


class SliceWeakValues(BaseModel):
    stage: str = Field(..., description="Snapshot stage of the slice")
    values: Dict[ModeLabel, ComplexValue] = Field(..., description="Weak value per segment of the slice")
    total: ComplexValue = Field(..., description="Sum over the slice (1 for a complete slice)")


class WeakValueReport(BaseModel):
    condition_port: ModeLabel = Field(..., description="Post-selected port")
    slices: List[SliceWeakValues] = Field(..., description="Time slices in evolution order")

    def value(self, segment: ModeLabel, stage: Optional[str] = None) -> complex:
        for time_slice in self.slices:
            if stage is not None and time_slice.stage != stage:
                continue
            if segment in time_slice.values:
                return time_slice.values[segment].to_complex()
        raise KeyError(segment)


class PhaseScanPoint(BaseModel):
    phi: float = Field(..., description="Phase (radians)")
    p_d: float = Field(..., description="Detection probability at D")


class PhaseScan(BaseModel):
    segment: ModeLabel = Field(..., description="Segment carrying the phase plate")
    points: List[PhaseScanPoint] = Field(..., description="Scan in increasing phi over [0, 2pi)")

    @property
    def spread(self) -> float:
        values = [point.p_d for point in self.points]
        return max(values) - min(values)


class ExclusivityVerdict(BaseModel):
    path: ModeLabel = Field(..., description="Path under test")
    phase_invariant: bool = Field(..., description="P(D) insensitive to a phase on the path")
    solo_prob_matches: bool = Field(..., description="P(D) with only this path open equals the full P(D)")
    ehdln_concludes_exclusive: bool = Field(..., description="Conjunction of the two criteria")
    phase_spread: float = Field(..., description="max - min of P(D) over the phase scan")
    solo_probability: float = Field(..., description="P(D) with the other two paths blocked")
    full_probability: float = Field(..., description="P(D) with every path open")

    @model_validator(mode='after')
    def validate_conjunction(self):
        if self.ehdln_concludes_exclusive != (self.phase_invariant and self.solo_prob_matches):
            raise ValueError("ehdln_concludes_exclusive must equal phase_invariant AND solo_prob_matches")
        return self


class ContradictionReport(BaseModel):
    verdicts: List[ExclusivityVerdict] = Field(..., description="Criterion applied to every path")
    contradiction_pair: List[ModeLabel] = Field(..., description="Paths the criterion declares exclusive")
    contradiction: bool = Field(..., description="True when two different paths are each declared exclusive")
    summary: str = Field(..., description="Human-readable verdict")

    def verdict(self, path: ModeLabel) -> ExclusivityVerdict:
        for verdict in self.verdicts:
            if verdict.path == path:
                return verdict
        raise KeyError(path)


class FPassageReport(BaseModel):
    theta: float
    epsilon: float
    p_f: float = Field(..., description="Probability of reaching F (post-BS3)")
    defined: bool = Field(..., description="False when P(F) vanishes and the conditional is undefined")
    p_both_ground: Optional[float] = Field(None, description="P(A and B markers ground | F)")
    p_exactly_one_excited: Optional[float] = Field(None, description="P(exactly one of A, B excited | F)")
    p_both_excited: Optional[float] = Field(None, description="P(both excited | F)")


class BranchTraces(BaseModel):
    c_marker: Literal["excited", "ground"] = Field(..., description="Outcome of the strong C marker")
    probability: float = Field(..., description="P(C-marker outcome | D)")
    defined: bool
    p_a: Optional[float] = Field(None, description="A-marker excitation in this branch")
    p_b: Optional[float] = Field(None, description="B-marker excitation in this branch")
    p_exactly_one_excited: Optional[float] = Field(None, description="P(exactly one of A, B excited) in this branch")


class ConclusiveBranchReport(BaseModel):
    theta_weak: float
    p_d: float = Field(..., description="Detection probability at D")
    p_c_excited_given_d: float = Field(..., description="P(C marker excited | D)")
    excited: BranchTraces
    ground: BranchTraces


class TrajectoryReport(BaseModel):
    trajectories: Dict[ModeLabel, List[List[ModeLabel]]] = Field(
        ..., description="Continuous S -> D trajectories through each path"
    )
    passage_points: Dict[ModeLabel, List[ModeLabel]] = Field(
        ..., description="Segments on every trajectory of the other two paths and off this path"
    )
    paths_with_passage_argument: List[ModeLabel] = Field(
        ..., description="Paths for which such a passage point exists"
    )
