from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.core.exceptions import DiscriminationError
from src.discrimination.povm import Povm, Verdict
from src.qcore.operations import apply_marker_operator
from src.qcore.state import TOLERANCE, UNDEFINED_PROBABILITY, JointState, MarkerId


@dataclass(frozen=True)
class MeasurementBranch:
    verdict: Verdict
    probability: float
    collapsed: Optional[JointState]


def measurement_branches(state: JointState, marker: MarkerId, povm: Povm) -> List[MeasurementBranch]:
    """Every POVM outcome on ``marker`` with its Born probability and collapsed state."""
    if state.subnormalized or abs(state.norm() - 1.0) > TOLERANCE:
        raise DiscriminationError("Measurements act on normalized states")

    branches = []
    for verdict in povm.verdicts:
        projected = apply_marker_operator(state, marker, povm.measurement_operator(verdict), subnormalized=True)
        probability = projected.norm()
        collapsed = projected.normalized() if probability >= UNDEFINED_PROBABILITY else None
        branches.append(MeasurementBranch(verdict=verdict, probability=probability, collapsed=collapsed))
    return branches


def sample_measurement(
    state: JointState,
    marker: MarkerId,
    povm: Povm,
    rng: np.random.Generator,
) -> Tuple[Verdict, JointState]:
    branches = measurement_branches(state, marker, povm)
    probabilities = np.array([branch.probability for branch in branches])
    total = probabilities.sum()
    if total < UNDEFINED_PROBABILITY:
        raise DiscriminationError("Measurement outcome probabilities vanish")

    cdf = np.cumsum(probabilities) / total
    index = min(int(np.searchsorted(cdf, rng.random(), side="right")), len(branches) - 1)
    # the clamp can land on a weightless last outcome when the cdf rounds below 1
    while branches[index].collapsed is None:
        index -= 1
    return branches[index].verdict, branches[index].collapsed
