from .grid import (
    AGENT_CHARS,
    DIR_VECTORS,
    AgentState,
    Direction,
    GridPos,
    GridState,
    LayoutError,
    NonRectangular,
    UnknownChar,
    forward_pos,
    parse_ascii_layout,
    resolve_moves,
    serialize_layout,
)
from .objects import (
    DuplicateChar,
    DuplicateKind,
    ObjectInstance,
    ObjectKind,
    Registry,
    RegistryError,
    UnknownKind,
    default_registry,
    register_object_kind,
)
from .rng import CounterRng, mix64
from .snapshot import (
    CorruptPayload,
    Snapshot,
    canonical_bytes,
    fnv1a64,
    restore,
    snapshot,
    state_checksum,
)

__all__ = [
    "AGENT_CHARS",
    "AgentState",
    "CorruptPayload",
    "CounterRng",
    "DIR_VECTORS",
    "Direction",
    "DuplicateChar",
    "DuplicateKind",
    "GridPos",
    "GridState",
    "LayoutError",
    "NonRectangular",
    "ObjectInstance",
    "ObjectKind",
    "Registry",
    "RegistryError",
    "Snapshot",
    "UnknownChar",
    "UnknownKind",
    "canonical_bytes",
    "default_registry",
    "fnv1a64",
    "forward_pos",
    "mix64",
    "parse_ascii_layout",
    "register_object_kind",
    "resolve_moves",
    "restore",
    "serialize_layout",
    "snapshot",
    "state_checksum",
]
