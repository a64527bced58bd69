"""Canonical state serialization, checksums, and snapshot/restore.

The byte layout is fixed and documented in docs/state-format.md: fixed
field order, little-endian fixed-width integers, no floats.  Equal
checksums therefore mean equal states, which is what the rollback layer's
desync detection relies on.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .grid import AgentState, Direction, GridPos, GridState
from .objects import ObjectInstance, Registry, UnknownKind, default_registry
from .rng import MASK64, CounterRng

FORMAT_VERSION = 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(payload: bytes) -> int:
    """FNV-1a 64-bit hash; trivially portable to any runtime."""
    h = _FNV_OFFSET
    for b in payload:
        h = ((h ^ b) * _FNV_PRIME) & MASK64
    return h


class SnapshotError(Exception):
    pass


class CorruptPayload(SnapshotError):
    pass


@dataclass(frozen=True)
class Snapshot:
    frame: int
    payload: bytes
    checksum: int


def _pack_layer(out: bytearray, layer: list[ObjectInstance | None]) -> None:
    for obj in layer:
        if obj is None:
            out.append(0)
        else:
            out.append(ord(obj.kind.char))
            out.append(len(obj.state))
            for v in obj.state:
                out += struct.pack("<i", v)


def canonical_bytes(state: GridState) -> bytes:
    out = bytearray()
    out.append(FORMAT_VERSION)
    scope = state.scope.encode("utf-8")
    out += struct.pack("<H", len(scope))
    out += scope
    out += struct.pack("<HH", state.width, state.height)
    out += struct.pack("<Q", state.tick)
    out += struct.pack("<QQ", state.rng.seed, state.rng.counter)
    _pack_layer(out, state.static_layer)
    _pack_layer(out, state.item_layer)
    out.append(len(state.agents))
    for agent in state.agents:
        inv = ord(agent.inventory.char) if agent.inventory else 0
        out += struct.pack("<BHHBB", agent.agent_id, agent.pos.row,
                           agent.pos.col, int(agent.dir), inv)
    return bytes(out)


def state_checksum(state: GridState) -> int:
    return fnv1a64(canonical_bytes(state))


def snapshot(state: GridState) -> Snapshot:
    payload = canonical_bytes(state)
    return Snapshot(frame=state.tick, payload=payload, checksum=fnv1a64(payload))


class _Reader:
    def __init__(self, payload: bytes):
        self.buf = payload
        self.at = 0

    def take(self, n: int) -> bytes:
        if self.at + n > len(self.buf):
            raise CorruptPayload("payload truncated")
        chunk = self.buf[self.at:self.at + n]
        self.at += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def _unpack_layer(reader: _Reader, state: GridState, registry: Registry,
                  item_layer: bool) -> None:
    for pos in state.cells():
        char_code = reader.u8()
        if char_code == 0:
            continue
        try:
            kind = registry.by_char(state.scope, chr(char_code))
        except UnknownKind as exc:
            raise CorruptPayload(str(exc)) from None
        n = reader.u8()
        values = [reader.unpack("<i")[0] for _ in range(n)]
        obj = ObjectInstance(kind, values)
        if item_layer:
            state.set_item(pos, obj)
        else:
            state.set_static(pos, obj)


def restore(snap: Snapshot, registry: Registry | None = None) -> GridState:
    """Rebuild a GridState from a snapshot, verifying the checksum."""
    registry = registry or default_registry
    if fnv1a64(snap.payload) != snap.checksum:
        raise CorruptPayload("checksum mismatch")
    reader = _Reader(snap.payload)
    version = reader.u8()
    if version != FORMAT_VERSION:
        raise CorruptPayload(f"unsupported format version {version}")
    (scope_len,) = reader.unpack("<H")
    scope = reader.take(scope_len).decode("utf-8")
    width, height = reader.unpack("<HH")
    (tick,) = reader.unpack("<Q")
    seed, counter = reader.unpack("<QQ")
    state = GridState(width, height, scope, CounterRng(seed, counter))
    state.tick = tick
    _unpack_layer(reader, state, registry, item_layer=False)
    _unpack_layer(reader, state, registry, item_layer=True)
    num_agents = reader.u8()
    for _ in range(num_agents):
        agent_id, row, col, dir_val, inv = reader.unpack("<BHHBB")
        inventory = None
        if inv:
            try:
                inventory = registry.by_char(scope, chr(inv))
            except UnknownKind as exc:
                raise CorruptPayload(str(exc)) from None
        state.agents.append(
            AgentState(agent_id, GridPos(row, col), Direction(dir_val), inventory)
        )
    if reader.at != len(reader.buf):
        raise CorruptPayload("trailing bytes in payload")
    return state
