"""
The exclusive-path criterion (phase invariance plus solo-path intensity)
and the trajectory asymmetry between path C and the inner paths.
"""
from typing import FrozenSet, List, Optional

import numpy as np

from src.analysis.reports import (
    ContradictionReport,
    ExclusivityVerdict,
    PhaseScan,
    PhaseScanPoint,
    TrajectoryReport,
)
from src.config.settings import get_settings
from src.core.exceptions import ConfigurationError, PhysicsAssertionError
from src.interferometer.config import PATHS, PHASE_SEGMENTS, NestedMziConfig
from src.interferometer.network import continuous_trajectories, evolve
from src.qcore.operations import condition_on_mode
from src.qcore.state import ModeLabel
from src.utils.logging_config import get_analysis_logger

logger = get_analysis_logger()

L = ModeLabel

PHASE_INVARIANCE_THRESHOLD = 1e-10
SOLO_MATCH_THRESHOLD = 1e-10


def _p_d(config: NestedMziConfig) -> float:
    return condition_on_mode(evolve(config).final, L.D).probability


def _require_path(path: ModeLabel, key: str = "segment") -> None:
    if path not in PATHS:
        raise ConfigurationError(f"Path must be one of {[str(p) for p in PATHS]}, got {path}", key=key)


def phase_scan(
    config: Optional[NestedMziConfig] = None,
    segment: ModeLabel = L.C,
    n_points: Optional[int] = None,
) -> PhaseScan:
    """P(D) at ``n_points`` phases evenly spaced over [0, 2pi) on ``segment``."""
    config = config or NestedMziConfig()
    n_points = n_points if n_points is not None else get_settings().DEFAULT_SCAN_POINTS
    if segment not in PHASE_SEGMENTS:
        raise ConfigurationError(f"Phase scans run on A, B or C, got {segment}", key="segment")
    if n_points < 2:
        raise ConfigurationError(f"A phase scan needs at least 2 points, got {n_points}", key="points")

    phis = 2 * np.pi * np.arange(n_points) / n_points
    points = [PhaseScanPoint(phi=float(phi), p_d=_p_d(config.with_phase(segment, float(phi)))) for phi in phis]
    scan = PhaseScan(segment=segment, points=points)

    logger.debug("phase_scan", segment=str(segment), points=n_points, spread=scan.spread)
    return scan


def solo_path_probability(path: ModeLabel, config: Optional[NestedMziConfig] = None) -> float:
    """P(D) with the other two paths blocked."""
    _require_path(path, key="path")
    config = config or NestedMziConfig()
    others = {other for other in PATHS if other != path}
    return _p_d(config.with_blocked(set(config.blocked) | others))


def exclusive_path_argument(
    path: ModeLabel,
    config: Optional[NestedMziConfig] = None,
    n_points: Optional[int] = None,
) -> ExclusivityVerdict:
    _require_path(path, key="path")
    config = config or NestedMziConfig()

    spread = phase_scan(config, path, n_points).spread
    full = _p_d(config)
    solo = solo_path_probability(path, config)

    phase_invariant = spread < PHASE_INVARIANCE_THRESHOLD
    solo_matches = abs(solo - full) < SOLO_MATCH_THRESHOLD
    return ExclusivityVerdict(
        path=path,
        phase_invariant=phase_invariant,
        solo_prob_matches=solo_matches,
        ehdln_concludes_exclusive=phase_invariant and solo_matches,
        phase_spread=spread,
        solo_probability=solo,
        full_probability=full,
    )


def contradiction_demo(
    config: Optional[NestedMziConfig] = None,
    strict: bool = True,
    n_points: Optional[int] = None,
) -> ContradictionReport:
    """
    Apply the exclusive-path criterion to A, B and C.

    In strict mode the tuned network must declare both B and C exclusive;
    otherwise PhysicsAssertionError is raised.
    """
    verdicts = [exclusive_path_argument(path, config, n_points) for path in PATHS]
    exclusive = [verdict.path for verdict in verdicts if verdict.ehdln_concludes_exclusive]
    contradiction = len(exclusive) >= 2

    if contradiction:
        summary = (
            f"The criterion declares the photon to travel solely through {' and solely through '.join(exclusive)}; "
            f"a single photon cannot take each of these paths exclusively"
        )
    elif exclusive:
        summary = f"Only {exclusive[0]} passes the criterion; no contradiction"
    else:
        summary = "No path passes the criterion; no contradiction"

    report = ContradictionReport(
        verdicts=verdicts,
        contradiction_pair=exclusive,
        contradiction=contradiction,
        summary=summary,
    )
    logger.info("contradiction_demo", exclusive=[str(p) for p in exclusive], contradiction=contradiction)

    if strict:
        failing = [str(v.path) for v in verdicts if v.path in (L.B, L.C) and not v.ehdln_concludes_exclusive]
        if failing:
            raise PhysicsAssertionError(
                f"Exclusive-path criterion no longer holds for {failing}; expected both B and C to pass"
            )
    return report


def _segments_through(path: ModeLabel, trajectories) -> List[FrozenSet[ModeLabel]]:
    return [frozenset(trajectory) for trajectory in trajectories if path in trajectory]


def passage_points(path: ModeLabel, config: Optional[NestedMziConfig] = None) -> FrozenSet[ModeLabel]:
    """
    Segments crossed by every trajectory of the other two paths and by no
    trajectory of ``path``. Empty when no such checkpoint exists.
    """
    _require_path(path, key="path")
    trajectories = continuous_trajectories(config)
    others = [segments for other in PATHS if other != path for segments in _segments_through(other, trajectories)]
    if not others:
        return frozenset()

    shared = frozenset.intersection(*others)
    own = frozenset().union(*_segments_through(path, trajectories))
    return frozenset(shared - own - {L.S, L.D})


def trajectory_asymmetry(config: Optional[NestedMziConfig] = None) -> TrajectoryReport:
    trajectories = continuous_trajectories(config)
    by_path = {
        path: [list(trajectory) for trajectory in trajectories if path in trajectory]
        for path in PATHS
    }
    points = {path: sorted(passage_points(path, config)) for path in PATHS}
    return TrajectoryReport(
        trajectories=by_path,
        passage_points=points,
        paths_with_passage_argument=[path for path in PATHS if points[path]],
    )
