from .argument import (
    contradiction_demo,
    exclusive_path_argument,
    passage_points,
    phase_scan,
    solo_path_probability,
    trajectory_asymmetry,
)
from .reports import (
    ComplexValue,
    ConclusiveBranchReport,
    ContradictionReport,
    ExclusivityVerdict,
    FPassageReport,
    PhaseScan,
    TraceReport,
    TrajectoryReport,
    WeakValueReport,
)
from .traces import conclusive_branch_traces, f_passage_check, weak_trace_report
from .weak_values import weak_value, weak_value_report

__all__ = [
    "ComplexValue",
    "ConclusiveBranchReport",
    "ContradictionReport",
    "ExclusivityVerdict",
    "FPassageReport",
    "PhaseScan",
    "TraceReport",
    "TrajectoryReport",
    "WeakValueReport",
    "conclusive_branch_traces",
    "contradiction_demo",
    "exclusive_path_argument",
    "f_passage_check",
    "passage_points",
    "phase_scan",
    "solo_path_probability",
    "trajectory_asymmetry",
    "weak_trace_report",
    "weak_value",
    "weak_value_report",
]
