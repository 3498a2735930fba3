"""
Monte Carlo accounting of per-photon verdicts among D-detections.

The joint (port, verdict triple) distribution is computed exactly once;
trials are then drawn from it in fixed-size blocks, each block keyed by
(seed, block index), so a tally depends only on (seed, trials, config).
"""
import concurrent.futures
import io
import time
from dataclasses import dataclass
from itertools import product
from math import sin
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.config.accounting_config import AccountingRuntime
from src.core.exceptions import ConfigurationError
from src.discrimination.povm import Povm, PovmMode, Verdict, build_discrimination_povm
from src.discrimination.sampling import measurement_branches
from src.interferometer.config import PATHS, NestedMziConfig
from src.interferometer.network import PORTS, evolve
from src.qcore.operations import condition_on_mode
from src.qcore.state import JointState, ModeLabel
from src.utils.logging_config import get_discrimination_logger

logger = get_discrimination_logger()

L = ModeLabel

DOUBLE_CONCLUSIVE = "double"


def combination_key(verdicts) -> str:
    return "".join(verdict.code for verdict in verdicts)


def all_combinations(povm_mode: PovmMode) -> List[str]:
    verdicts = (
        (Verdict.CONCLUSIVE_PRESENT, Verdict.INCONCLUSIVE)
        if PovmMode(povm_mode) == PovmMode.BASIS_CHECK
        else (Verdict.CONCLUSIVE_PRESENT, Verdict.CONCLUSIVE_ABSENT, Verdict.INCONCLUSIVE)
    )
    return sorted(combination_key(combo) for combo in product(verdicts, repeat=len(PATHS)))


def is_double_conclusive(combination: str) -> bool:
    return combination.count(Verdict.CONCLUSIVE_PRESENT.code) >= 2


class AccountingTally(BaseModel):
    theta: float = Field(..., description="Common marker angle on A, B, C")
    povm: PovmMode = Field(..., description="Discrimination POVM")
    seed: int = Field(..., ge=0, lt=2**64, description="Counter-based RNG seed")
    total_trials: int = Field(..., ge=0, description="Photons emitted")
    detections_at_d: int = Field(..., ge=0, description="Photons detected at D")
    port_counts: Dict[ModeLabel, int] = Field(..., description="Detections per port over all trials")
    counts: Dict[str, int] = Field(..., description="Verdict combination over A, B, C markers -> D-detections")

    @model_validator(mode='after')
    def validate_totals(self):
        if sum(self.counts.values()) != self.detections_at_d:
            raise ValueError("Verdict counts must sum to the D-detections")
        if sum(self.port_counts.values()) != self.total_trials:
            raise ValueError("Port counts must sum to the number of trials")
        return self

    @classmethod
    def empty(cls, theta: float, povm: PovmMode, seed: int) -> "AccountingTally":
        return cls(
            theta=theta,
            povm=povm,
            seed=seed,
            total_trials=0,
            detections_at_d=0,
            port_counts={port: 0 for port in PORTS},
            counts={combination: 0 for combination in all_combinations(povm)},
        )

    def merge(self, other: "AccountingTally") -> "AccountingTally":
        if (self.theta, self.povm, self.seed) != (other.theta, other.povm, other.seed):
            raise ValueError("Only tallies of the same run can be merged")
        return AccountingTally(
            theta=self.theta,
            povm=self.povm,
            seed=self.seed,
            total_trials=self.total_trials + other.total_trials,
            detections_at_d=self.detections_at_d + other.detections_at_d,
            port_counts={port: self.port_counts.get(port, 0) + other.port_counts.get(port, 0) for port in PORTS},
            counts={key: self.counts.get(key, 0) + other.counts.get(key, 0) for key in sorted(self.counts | other.counts)},
        )

    @property
    def double_conclusive(self) -> int:
        return sum(count for key, count in self.counts.items() if is_double_conclusive(key))

    def fraction_at_d(self) -> float:
        return self.detections_at_d / self.total_trials if self.total_trials else 0.0

    def fractions(self) -> Dict[str, float]:
        """Verdict combinations as fractions of the D-detections."""
        if not self.detections_at_d:
            return {key: 0.0 for key in self.counts}
        return {key: count / self.detections_at_d for key, count in self.counts.items()}

    def to_csv(self) -> str:
        fractions = self.fractions()
        buffer = io.StringIO()
        buffer.write("combination,count,fraction\n")
        for key in sorted(self.counts):
            buffer.write(f"{key},{self.counts[key]},{fractions[key]!r}\n")
        return buffer.getvalue()


@dataclass(frozen=True)
class Outcome:
    port: ModeLabel
    combination: Optional[str]
    probability: float


def equal_path_theta(config: NestedMziConfig) -> float:
    """The common marker angle; markers must sit on exactly A, B and C."""
    locations = sorted(str(marker.location) for marker in config.markers)
    if locations != sorted(str(path) for path in PATHS):
        raise ConfigurationError(
            f"Accounting needs markers on exactly A, B and C, got {locations}", key="markers"
        )
    thetas = {marker.theta for marker in config.markers}
    if len(thetas) != 1:
        raise ConfigurationError(f"Accounting needs equal marker angles, got {sorted(thetas)}", key="markers")
    return thetas.pop()


def _verdict_outcomes(state: JointState, povm: Povm, probability: float, prefix: Tuple[Verdict, ...]):
    if len(prefix) == len(PATHS):
        yield prefix, probability
        return
    marker = state.marker_at(PATHS[len(prefix)])
    for branch in measurement_branches(state, marker, povm):
        if branch.collapsed is not None:
            yield from _verdict_outcomes(branch.collapsed, povm, probability * branch.probability, prefix + (branch.verdict,))


def outcome_distribution(config: NestedMziConfig, povm: Povm) -> List[Outcome]:
    """
    Exact joint distribution of detection port and, for D, the verdicts on
    the A, B, C markers measured in that order.
    """
    final = evolve(config).final
    outcomes: List[Outcome] = []
    for port in PORTS:
        result = condition_on_mode(final, port)
        if not result.defined:
            continue
        if port != L.D:
            outcomes.append(Outcome(port=port, combination=None, probability=result.probability))
            continue
        for verdicts, probability in _verdict_outcomes(result.conditional, povm, 1.0, ()):
            outcomes.append(Outcome(
                port=port,
                combination=combination_key(verdicts),
                probability=result.probability * probability,
            ))
    return outcomes


def block_generator(seed: int, block_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed << 64) | block_index))


def _sample_block(
    outcomes: List[Outcome],
    cdf: np.ndarray,
    theta: float,
    povm_mode: PovmMode,
    seed: int,
    block_index: int,
    size: int,
) -> AccountingTally:
    draws = block_generator(seed, block_index).random(size)
    indices = np.minimum(np.searchsorted(cdf, draws, side="right"), len(outcomes) - 1)
    hits = np.bincount(indices, minlength=len(outcomes))

    tally = AccountingTally.empty(theta, povm_mode, seed)
    port_counts = dict(tally.port_counts)
    counts = dict(tally.counts)
    for outcome, hit in zip(outcomes, hits):
        port_counts[outcome.port] += int(hit)
        if outcome.combination is not None:
            counts[outcome.combination] += int(hit)

    return AccountingTally(
        theta=theta,
        povm=povm_mode,
        seed=seed,
        total_trials=size,
        detections_at_d=port_counts[L.D],
        port_counts=port_counts,
        counts=counts,
    )


def monte_carlo_accounting(
    config: NestedMziConfig,
    povm_mode: PovmMode = PovmMode.BASIS_CHECK,
    n_trials: Optional[int] = None,
    seed: Optional[int] = None,
    runtime: Optional[AccountingRuntime] = None,
) -> AccountingTally:
    runtime = runtime or AccountingRuntime.from_env()
    seed = runtime.default_seed if seed is None else seed
    n_trials = n_trials if n_trials is not None else runtime.default_trials
    if n_trials < 1:
        raise ConfigurationError(f"Accounting needs at least one trial, got {n_trials}", key="trials")
    if not 0 <= seed < 2**64:
        raise ConfigurationError(f"Seed must be an unsigned 64-bit integer, got {seed}", key="seed")

    povm_mode = PovmMode(povm_mode)
    theta = equal_path_theta(config)
    povm = build_discrimination_povm(theta, povm_mode)

    outcomes = outcome_distribution(config, povm)
    cdf = np.cumsum([outcome.probability for outcome in outcomes])
    cdf = cdf / cdf[-1]

    block_size = runtime.block_size
    blocks = [
        (index, min(block_size, n_trials - start))
        for index, start in enumerate(range(0, n_trials, block_size))
    ]

    start_time = time.time()
    with concurrent.futures.ThreadPoolExecutor(max_workers=runtime.workers) as executor:
        # map yields in submission order, so the merge order is fixed
        partials = executor.map(
            lambda block: _sample_block(outcomes, cdf, theta, povm_mode, seed, block[0], block[1]),
            blocks,
        )
        tally = AccountingTally.empty(theta, povm_mode, seed)
        for partial in partials:
            tally = tally.merge(partial)

    logger.info(
        "accounting_complete",
        trials=n_trials,
        blocks=len(blocks),
        workers=runtime.workers,
        detections_at_d=tally.detections_at_d,
        double_conclusive=tally.double_conclusive,
        duration=round(time.time() - start_time, 3),
    )
    return tally


def expected_fractions(theta: float) -> Dict[str, float]:
    """Closed-form BASIS_CHECK fractions among D-detections."""
    if not 0.0 <= theta <= np.pi / 2:
        raise ConfigurationError(f"Marker angle must lie in [0, pi/2], got {theta}", key="theta")
    s2 = sin(theta) ** 2
    norm = 1.0 + 2.0 * s2
    single = s2 / norm
    return {
        "PII": single,
        "IPI": single,
        "IIP": single,
        "III": (1.0 - s2) / norm,
        DOUBLE_CONCLUSIVE: 0.0,
    }
