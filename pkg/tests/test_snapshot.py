import pytest

from gridplay.core import (
    CorruptPayload,
    CounterRng,
    Direction,
    GridPos,
    ObjectKind,
    Registry,
    canonical_bytes,
    parse_ascii_layout,
    restore,
    snapshot,
    state_checksum,
)
from gridplay.core.snapshot import Snapshot, fnv1a64


@pytest.fixture
def reg():
    reg = Registry()
    reg.register(ObjectKind("wall", "s", "#", blocks_movement=True))
    reg.register(ObjectKind("gem", "s", "g", can_pickup=True))
    reg.register(ObjectKind("box", "s", "b", blocks_movement=True,
                            state_init=(0, 0)))
    return reg


def make_state(reg, seed=11):
    state = parse_ascii_layout("##g##\n#1 2#\n##b##", "s", seed=seed, registry=reg)
    return state


def test_snapshot_restore_identity(reg):
    state = make_state(reg)
    snap = snapshot(state)
    restored = restore(snap, registry=reg)
    assert canonical_bytes(restored) == snap.payload
    assert snapshot(restored).checksum == snap.checksum


def test_restore_preserves_everything(reg):
    state = make_state(reg)
    state.tick = 41
    state.rng.next_u64()
    state.agents[0].dir = Direction.UP
    state.agents[1].inventory = reg.by_name("s", "gem")
    box = state.static_at(GridPos(2, 2))
    box.state[0] = 3
    restored = restore(snapshot(state), registry=reg)
    assert restored.tick == 41
    assert restored.rng.counter == state.rng.counter
    assert restored.agents[0].dir == Direction.UP
    assert restored.agents[1].inventory.name == "gem"
    assert restored.static_at(GridPos(2, 2)).state == [3, 0]


def test_flipped_byte_detected(reg):
    snap = snapshot(make_state(reg))
    payload = bytearray(snap.payload)
    payload[len(payload) // 2] ^= 0xFF
    bad = Snapshot(snap.frame, bytes(payload), snap.checksum)
    with pytest.raises(CorruptPayload):
        restore(bad, registry=reg)


def test_truncated_payload_detected(reg):
    snap = snapshot(make_state(reg))
    short = snap.payload[:-3]
    bad = Snapshot(snap.frame, short, fnv1a64(short))
    with pytest.raises(CorruptPayload):
        restore(bad, registry=reg)


def test_checksum_collision_smoke(reg):
    # 1,000 distinct random states must produce 1,000 distinct checksums.
    rng = CounterRng(seed=404)
    seen = set()
    for _ in range(1000):
        state = make_state(reg)
        state.tick = rng.randrange(10_000)
        state.rng = CounterRng(rng.next_u64(), rng.randrange(1000))
        state.agents[0].pos = GridPos(1, rng.randint(1, 3))
        state.agents[0].dir = Direction(rng.randrange(4))
        box = state.static_at(GridPos(2, 2))
        box.state[0] = rng.randrange(1 << 30)
        box.state[1] = rng.randrange(1 << 30)
        seen.add(state_checksum(state))
    assert len(seen) == 1000


def test_checksum_reflects_payload_only(reg):
    a = make_state(reg)
    b = make_state(reg)
    assert state_checksum(a) == state_checksum(b)
    b.agents[0].dir = Direction.DOWN
    assert state_checksum(a) != state_checksum(b)


def test_frozen_fnv_vectors():
    # Standard FNV-1a 64 test vectors: changing the hash silently would
    # desynchronize every peer implementation.
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8
