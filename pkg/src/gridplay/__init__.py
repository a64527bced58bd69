"""gridplay: deterministic multi-agent gridworld engine with rollback
netcode and a browser experiment server.

The core simulation (gridplay.core, gridplay.env, gridplay.envs) is pure
standard library and safe to build for constrained runtimes; the server
(gridplay.server.app) is the only module that needs aiohttp.
"""

from .core import (
    CounterRng,
    Direction,
    GridPos,
    GridState,
    ObjectKind,
    Snapshot,
    parse_ascii_layout,
    restore,
    snapshot,
    state_checksum,
)
from .env import EnvConfig, GridEnv, StepResult
from .replay import MismatchAt, episode_seed, verify_file
from .rollback import InputBundle, RollbackSession

__version__ = "0.1.0"

__all__ = [
    "CounterRng",
    "Direction",
    "EnvConfig",
    "GridEnv",
    "GridPos",
    "GridState",
    "InputBundle",
    "MismatchAt",
    "ObjectKind",
    "RollbackSession",
    "Snapshot",
    "StepResult",
    "episode_seed",
    "parse_ascii_layout",
    "restore",
    "snapshot",
    "state_checksum",
    "verify_file",
]
