"""
Unambiguous path discrimination on marker qubits and Monte Carlo accounting.
"""
from .accounting import (
    AccountingTally,
    Outcome,
    expected_fractions,
    monte_carlo_accounting,
    outcome_distribution,
)
from .povm import Povm, PovmMode, Verdict, build_discrimination_povm
from .sampling import MeasurementBranch, measurement_branches, sample_measurement

__all__ = [
    "AccountingTally",
    "MeasurementBranch",
    "Outcome",
    "Povm",
    "PovmMode",
    "Verdict",
    "build_discrimination_povm",
    "expected_fractions",
    "measurement_branches",
    "monte_carlo_accounting",
    "outcome_distribution",
    "sample_measurement",
]
