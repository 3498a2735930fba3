"""
Weak traces left on the path markers, conditioned on a detection.
"""
from math import pi, sin
from typing import Dict, Optional

from src.analysis.reports import (
    BranchTraces,
    ConclusiveBranchReport,
    FPassageReport,
    MarkerTrace,
    TraceReport,
)
from src.core.exceptions import ConfigurationError, PostselectionError
from src.interferometer.config import MarkerSpec, NestedMziConfig, equal_markers
from src.interferometer.network import Stage, evolve
from src.qcore.operations import condition_on_marker, condition_on_mode, reduced_marker_state
from src.qcore.state import JointState, ModeLabel
from src.utils.logging_config import get_analysis_logger

logger = get_analysis_logger()

L = ModeLabel


def _check_theta(theta: float, key: str = "theta") -> None:
    if not 0.0 <= theta <= pi / 2:
        raise ConfigurationError(f"Marker angle must lie in [0, pi/2], got {theta}", key=key)


def weak_trace_report(config: NestedMziConfig, condition_port: ModeLabel = L.D) -> TraceReport:
    """Excitation probability and ground-state fidelity of every marker given ``condition_port``."""
    if config.marker_free:
        raise ConfigurationError("A trace report needs at least one marker", key="markers")

    final = evolve(config).final
    result = condition_on_mode(final, condition_port)
    if not result.defined:
        raise PostselectionError(
            f"Port {condition_port} has probability {result.probability:.3e}; the conditional state is undefined"
        )

    traces = []
    for marker in result.conditional.markers:
        spec = config.marker_on(marker.location)
        reduced = reduced_marker_state(result.conditional, marker)
        traces.append(MarkerTrace(
            location=marker.location,
            theta=spec.theta,
            epsilon=spec.epsilon,
            excitation_probability=reduced.excitation_probability,
            fidelity_to_ground=reduced.fidelity_to_ground,
        ))

    logger.info(
        "weak_trace_report",
        port=str(condition_port),
        probability=result.probability,
        traces={str(t.location): t.excitation_probability for t in traces},
    )
    return TraceReport(condition_port=condition_port, port_probability=result.probability, markers=traces)


def _exactly_one_excited(populations: Dict[str, float], first: int, second: int) -> float:
    return sum(weight for bits, weight in populations.items() if bits[first] != bits[second])


def f_passage_check(theta: float, config: Optional[NestedMziConfig] = None) -> FPassageReport:
    """
    Condition the post-BS3 snapshot on F with equal markers on A and B only.

    At theta = 0 nothing reaches F and the report says so instead of failing.
    """
    _check_theta(theta)
    base = config or NestedMziConfig()
    config = base.with_markers(equal_markers(theta, (L.A, L.B)))

    snapshot = evolve(config).snapshot(Stage.POST_BS3)
    result = condition_on_mode(snapshot, L.F)
    if not result.defined:
        logger.info("f_passage_undefined", theta=theta, p_f=result.probability)
        return FPassageReport(theta=theta, epsilon=sin(theta), p_f=result.probability, defined=False)

    populations = result.conditional.marker_populations()
    index_a = result.conditional.markers.index(result.conditional.marker_at(L.A))
    index_b = result.conditional.markers.index(result.conditional.marker_at(L.B))

    report = FPassageReport(
        theta=theta,
        epsilon=sin(theta),
        p_f=result.probability,
        defined=True,
        p_both_ground=populations["00"],
        p_exactly_one_excited=_exactly_one_excited(populations, index_a, index_b),
        p_both_excited=populations["11"],
    )
    logger.info("f_passage_check", theta=theta, p_f=report.p_f, p_exactly_one=report.p_exactly_one_excited)
    return report


def _branch(conditional: Optional[JointState], probability: float, outcome: str) -> BranchTraces:
    if conditional is None:
        return BranchTraces(c_marker=outcome, probability=probability, defined=False)

    marker_a = conditional.marker_at(L.A)
    marker_b = conditional.marker_at(L.B)
    populations = conditional.marker_populations()
    return BranchTraces(
        c_marker=outcome,
        probability=probability,
        defined=True,
        p_a=reduced_marker_state(conditional, marker_a).excitation_probability,
        p_b=reduced_marker_state(conditional, marker_b).excitation_probability,
        p_exactly_one_excited=_exactly_one_excited(
            populations, conditional.markers.index(marker_a), conditional.markers.index(marker_b)
        ),
    )


def conclusive_branch_traces(theta_weak: float, config: Optional[NestedMziConfig] = None) -> ConclusiveBranchReport:
    """
    Fully efficient marker on C, weak markers on A and B; split the
    D-detections by the C-marker outcome.
    """
    _check_theta(theta_weak, key="theta_weak")
    base = config or NestedMziConfig()
    config = base.with_markers(
        equal_markers(theta_weak, (L.A, L.B)) + (MarkerSpec(location=L.C, theta=pi / 2),)
    )

    final = evolve(config).final
    at_d = condition_on_mode(final, L.D)
    if not at_d.defined:
        raise PostselectionError(f"P(D) = {at_d.probability:.3e}; nothing to condition on")

    marker_c = at_d.conditional.marker_at(L.C)
    excited = condition_on_marker(at_d.conditional, marker_c, 1)
    ground = condition_on_marker(at_d.conditional, marker_c, 0)

    report = ConclusiveBranchReport(
        theta_weak=theta_weak,
        p_d=at_d.probability,
        p_c_excited_given_d=excited.probability,
        excited=_branch(excited.conditional, excited.probability, "excited"),
        ground=_branch(ground.conditional, ground.probability, "ground"),
    )
    logger.info(
        "conclusive_branch_traces",
        theta_weak=theta_weak,
        p_c_excited=report.p_c_excited_given_d,
        excited_p_a=report.excited.p_a,
        ground_exactly_one=report.ground.p_exactly_one_excited,
    )
    return report
