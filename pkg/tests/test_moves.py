"""Simultaneous-movement conflict resolution against an independent oracle."""

from itertools import product

import pytest

from gridplay.core import (
    AgentState,
    Direction,
    GridPos,
    GridState,
    ObjectInstance,
    ObjectKind,
    Registry,
    resolve_moves,
)

WALL = ObjectKind("wall", "mv", "#", blocks_movement=True)
REG = Registry()
REG.register(WALL)


def open_grid(width=4, height=4, walls=()):
    state = GridState(width, height, "mv")
    for pos in walls:
        state.set_static(GridPos(*pos), ObjectInstance(WALL))
    return state


def with_agents(state, positions):
    state.agents = [AgentState(i, GridPos(*p), Direction.RIGHT)
                    for i, p in enumerate(positions)]
    return state


STEPS = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)]


def oracle_outcome(state, proposals):
    """Greatest valid mover subset, found by brute-force enumeration.

    A subset S of movers is valid when every member's target is in
    bounds, unblocked, not contested under the same-target or swap rule,
    and not the final cell of any agent outside S.  The outcome of the
    rules is the unique maximal valid subset.
    """
    current = {a.agent_id: a.pos for a in state.agents}
    movers = {aid: t for aid, t in proposals.items() if t != current[aid]}

    # Hard cancellations independent of other moves.
    hard_blocked = set()
    for aid, target in movers.items():
        if not state.in_bounds(target) or state.blocks_movement(target):
            hard_blocked.add(aid)
    targets = list(movers.items())
    for aid, target in targets:
        for oid, otarget in targets:
            if oid == aid:
                continue
            if otarget == target:
                hard_blocked.update((aid, oid))
            if otarget == current[aid] and target == current[oid]:
                hard_blocked.update((aid, oid))
    candidates = [aid for aid in movers if aid not in hard_blocked]

    best = None
    for bits in product([False, True], repeat=len(candidates)):
        subset = {aid for aid, take in zip(candidates, bits) if take}
        stay_cells = {current[aid] for aid in current if aid not in subset}
        if any(movers[aid] in stay_cells for aid in subset):
            continue
        if best is None or len(subset) > len(best):
            best = subset
    final = dict(current)
    for aid in best or set():
        final[aid] = movers[aid]
    return final


def run_impl(positions, proposals, walls=()):
    state = with_agents(open_grid(walls=walls), positions)
    resolve_moves(state, {aid: GridPos(*t) for aid, t in proposals.items()})
    return {a.agent_id: tuple(a.pos) for a in state.agents}


def run_oracle(positions, proposals, walls=()):
    state = with_agents(open_grid(walls=walls), positions)
    out = oracle_outcome(state, {aid: GridPos(*t) for aid, t in proposals.items()})
    return {aid: tuple(pos) for aid, pos in out.items()}


def test_uncontested_move():
    result = run_impl([(1, 1), (3, 3)], {0: (1, 2), 1: (3, 3)})
    assert result == {0: (1, 2), 1: (3, 3)}


def test_same_target_blocks_both():
    result = run_impl([(1, 0), (1, 2)], {0: (1, 1), 1: (1, 1)})
    assert result == {0: (1, 0), 1: (1, 2)}


def test_swap_blocks_both():
    result = run_impl([(1, 1), (1, 2)], {0: (1, 2), 1: (1, 1)})
    assert result == {0: (1, 1), 1: (1, 2)}


def test_move_into_wall_blocked():
    result = run_impl([(1, 1), (3, 3)], {0: (0, 1), 1: (3, 3)},
                      walls=[(0, 1)])
    assert result[0] == (1, 1)


def test_chain_follows_leader():
    # 1 vacates, 0 takes its cell.
    result = run_impl([(1, 1), (1, 2)], {0: (1, 2), 1: (1, 3)})
    assert result == {0: (1, 2), 1: (1, 3)}


def test_chain_stranded_when_leader_blocked():
    result = run_impl([(1, 1), (1, 2)], {0: (1, 2), 1: (0, 2)},
                      walls=[(0, 2)])
    assert result == {0: (1, 1), 1: (1, 2)}


def test_four_agent_rotation_succeeds():
    positions = [(0, 0), (0, 1), (1, 1), (1, 0)]
    proposals = {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (0, 0)}
    result = run_impl(positions, proposals)
    assert result == {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (0, 0)}


def test_exhaustive_two_agent_configurations():
    # Every placement of two agents on a 4x4 board with a wall, times
    # every stay/step proposal pair, must match the subset oracle.
    walls = [(2, 2)]
    cells = [(r, c) for r in range(4) for c in range(4) if (r, c) not in walls]
    checked = 0
    for p0, p1 in product(cells, cells):
        if p0 == p1:
            continue
        for s0, s1 in product(STEPS, STEPS):
            t0 = (p0[0] + s0[0], p0[1] + s0[1])
            t1 = (p1[0] + s1[0], p1[1] + s1[1])
            proposals = {0: t0, 1: t1}
            got = run_impl([p0, p1], proposals, walls=walls)
            want = run_oracle([p0, p1], proposals, walls=walls)
            assert got == want, (
                f"agents {p0},{p1} proposals {t0},{t1}: impl {got} oracle {want}"
            )
            checked += 1
    assert checked > 4000


def test_order_independence_by_relabeling():
    # Swapping agent identities and mirroring the proposals must mirror
    # the outcome; resolve_moves may not privilege low ids.
    cases = [
        ([(1, 1), (1, 2)], {0: (1, 2), 1: (1, 3)}),
        ([(1, 0), (1, 2)], {0: (1, 1), 1: (1, 1)}),
        ([(1, 1), (1, 2)], {0: (1, 2), 1: (1, 1)}),
        ([(0, 0), (1, 0)], {0: (0, 1), 1: (0, 0)}),
    ]
    for positions, proposals in cases:
        direct = run_impl(positions, proposals)
        swapped_positions = [positions[1], positions[0]]
        swapped_proposals = {0: proposals[1], 1: proposals[0]}
        mirrored = run_impl(swapped_positions, swapped_proposals)
        assert direct[0] == mirrored[1] and direct[1] == mirrored[0]


def test_bad_target_out_of_bounds_is_noop():
    result = run_impl([(0, 0), (3, 3)], {0: (-1, 0), 1: (3, 3)})
    assert result[0] == (0, 0)
