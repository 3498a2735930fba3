from dataclasses import dataclass
from typing import Optional

from src.config.settings import get_settings


@dataclass(frozen=True)
class AccountingRuntime:
    """Execution knobs for the Monte Carlo accounting runner"""

    # Worker threads drawing trial blocks
    workers: int

    # Trials per RNG block; fixes the (seed, trial) -> draw mapping
    block_size: int

    # Seed used when the caller gives none
    default_seed: int

    # Trials used when the caller gives none
    default_trials: int

    @classmethod
    def from_env(cls, workers: Optional[int] = None) -> 'AccountingRuntime':
        """Create configuration from centralized settings"""
        settings = get_settings()
        return cls(
            workers=workers if workers is not None else settings.ACCOUNTING_WORKERS,
            block_size=settings.ACCOUNTING_BLOCK_SIZE,
            default_seed=settings.DEFAULT_SEED,
            default_trials=settings.DEFAULT_TRIALS,
        )
