from ._core import (
    AirdropError,
    compute_reward,
    detect,
    early_bird_multiplier,
    profit,
    run_cli,
    solve,
    verify,
    volume_multiplier,
)

__version__ = "1.0.0"

__all__ = [
    "AirdropError",
    "compute_reward",
    "detect",
    "early_bird_multiplier",
    "profit",
    "run_cli",
    "solve",
    "verify",
    "volume_multiplier",
]
