"""Cramped room kitchen: mechanics, rewards, and observation features.

The full-cycle script below was traced by hand against the layout

    XXPXX        pot (0,2)   onion stack (1,0)
    O 1 X        plate stack (3,1)   delivery (3,3)
    X 2 X        agent 0 spawn (1,2)   agent 1 spawn (2,2)
    XDXSX

and its expected per-tick rewards are frozen.
"""

import pytest

from gridplay.core import CounterRng, Direction, GridPos, state_checksum
from gridplay.envs import make_cramped_room, overcooked
from gridplay.envs.overcooked import (
    POT_ONIONS,
    POT_STATUS,
    POT_TIMER,
    STATUS_COOKING,
    STATUS_IDLE,
    STATUS_READY,
)

# Cardinal action ids (wire encoding).
UP, DOWN, LEFT, RIGHT, INTERACT, TOGGLE, NOOP = range(7)

POT_POS = GridPos(0, 2)


def fresh(seed=0, cook_time=20):
    env = make_cramped_room(seed=seed, cook_time=cook_time)
    state, obs = env.reset()
    return env, state, obs


# One full soup: 3 onions -> cook (20 ticks) -> plate -> deliver.
# Agent 1 idles in place the whole time.
FULL_CYCLE = (
    [LEFT, INTERACT, RIGHT, UP, INTERACT] * 3        # t0..t14: three onions
    + [LEFT, DOWN, INTERACT, UP, RIGHT, UP]          # t15..t20: fetch plate
    + [NOOP] * 14                                    # t21..t34: cooking
    + [INTERACT, RIGHT, DOWN, INTERACT]              # t35..t38: plate, deliver
)

EXPECTED_REWARDS = {4: 0.1, 9: 0.1, 14: 0.1, 35: 0.3, 38: 1.0}


def test_object_census():
    _, state, _ = fresh()
    census = state.census()
    assert census["pot"] == 1
    assert census["onion_stack"] == 1
    assert census["plate_stack"] == 1
    assert census["delivery_zone"] == 1
    assert len(state.agents) == 2


def test_reset_determinism():
    _, a, _ = fresh(seed=33)
    _, b, _ = fresh(seed=33)
    assert state_checksum(a) == state_checksum(b)


def test_full_cycle_hand_traced_rewards():
    env, state, _ = fresh()
    deliveries = 0
    team_total = 0.0
    for t, action in enumerate(FULL_CYCLE):
        state, result = env.step(state, {0: action, 1: NOOP})
        team = result.rewards[0] + result.rewards[1]
        expected = EXPECTED_REWARDS.get(t, 0.0)
        assert team == pytest.approx(expected), f"tick {t}: {team} != {expected}"
        deliveries += sum(info["delivered"] for info in result.infos.values())
        team_total += team
    assert deliveries == 1
    assert team_total == pytest.approx(1.6)


def test_pot_state_machine_through_cycle():
    env, state, _ = fresh()
    for t, action in enumerate(FULL_CYCLE):
        state, _ = env.step(state, {0: action, 1: NOOP})
        pot = state.static_at(POT_POS)
        if t == 14:  # third onion landed this tick
            assert pot.state == [3, 20, STATUS_COOKING]
        if t == 34:  # timer just hit zero
            assert pot.state[POT_STATUS] == STATUS_READY
            assert pot.state[POT_TIMER] == 0
        if t == 35:  # soup plated, pot resets
            assert pot.state == [0, 0, STATUS_IDLE]
    assert state.agent(0).inventory is None


def test_deposit_into_cooking_pot_is_noop():
    env, state, _ = fresh()
    pot = state.static_at(POT_POS)
    pot.state[:] = [3, 10, STATUS_COOKING]
    agent = state.agent(0)
    agent.dir = Direction.UP
    agent.inventory = overcooked.state_kind(state, "onion")
    state, result = env.step(state, {0: INTERACT, 1: NOOP})
    assert state.agent(0).inventory.name == "onion"
    assert result.rewards[0] == 0.0
    assert state.static_at(POT_POS).state[POT_ONIONS] == 3


def test_plate_into_ready_pot_yields_soup():
    env, state, _ = fresh()
    pot = state.static_at(POT_POS)
    pot.state[:] = [3, 0, STATUS_READY]
    agent = state.agent(0)
    agent.dir = Direction.UP
    agent.inventory = overcooked.state_kind(state, "plate")
    state, result = env.step(state, {0: INTERACT, 1: NOOP})
    assert state.agent(0).inventory.name == "onion_soup"
    assert result.rewards[0] == pytest.approx(0.3)
    assert state.static_at(POT_POS).state == [0, 0, STATUS_IDLE]


def test_counter_holds_one_item():
    env, state, _ = fresh()
    agent = state.agent(1)  # at (2,2); counter at (2,0)? face (2,4) wall X
    agent.pos = GridPos(2, 1)
    agent.dir = Direction.LEFT  # faces counter (2,0)
    agent.inventory = overcooked.state_kind(state, "onion")
    state, _ = env.step(state, {0: NOOP, 1: INTERACT})
    assert state.agent(1).inventory is None
    assert state.item_at(GridPos(2, 0)).kind.name == "onion"
    # A second placement on the same counter is refused.
    state.agent(1).inventory = overcooked.state_kind(state, "plate")
    state, _ = env.step(state, {0: NOOP, 1: INTERACT})
    assert state.agent(1).inventory.name == "plate"
    # Empty the hand, then pick the onion back up.
    state.agent(1).inventory = None
    state, _ = env.step(state, {0: NOOP, 1: INTERACT})
    assert state.agent(1).inventory.name == "onion"
    assert state.item_at(GridPos(2, 0)) is None


def test_floor_drop_refused():
    env, state, _ = fresh()
    agent = state.agent(0)  # at (1,2) facing RIGHT at floor (1,3)
    agent.inventory = overcooked.state_kind(state, "onion")
    state, _ = env.step(state, {0: INTERACT, 1: NOOP})
    assert state.agent(0).inventory.name == "onion"
    assert state.item_at(GridPos(1, 3)) is None


def test_facing_another_chef_blocks_interaction():
    env, state, _ = fresh()
    agent = state.agent(0)
    agent.dir = Direction.DOWN  # agent 1 stands at (2,2)
    agent.inventory = None
    state, _ = env.step(state, {0: INTERACT, 1: NOOP})
    assert state.agent(0).inventory is None


def test_reward_values_limited_to_documented_set():
    env, state, _ = fresh(seed=77)
    rng = CounterRng(1234)
    seen = set()
    for _ in range(600):
        actions = {0: rng.randrange(7), 1: rng.randrange(7)}
        state, result = env.step(state, actions)
        for value in result.rewards.values():
            if value:
                seen.add(round(value, 6))
    assert seen <= {0.1, 0.3, 1.0}


def test_pot_monotonicity_under_random_play():
    env, state, _ = fresh(seed=5)
    rng = CounterRng(99)
    prev_pot = list(state.static_at(POT_POS).state)
    for _ in range(600):
        state, _ = env.step(state, {0: rng.randrange(7), 1: rng.randrange(7)})
        pot = state.static_at(POT_POS).state
        assert 0 <= pot[POT_ONIONS] <= 3
        if pot[POT_STATUS] == prev_pot[POT_STATUS] == STATUS_COOKING:
            assert pot[POT_TIMER] <= prev_pot[POT_TIMER]
        prev_pot = list(pot)


def test_soup_conservation_under_random_play():
    env, state, _ = fresh(seed=21)
    rng = CounterRng(7)
    deliveries = delivery_rewards = 0
    for _ in range(2000):
        state, result = env.step(state, {0: rng.randrange(7), 1: rng.randrange(7)})
        deliveries += sum(info["delivered"] for info in result.infos.values())
        delivery_rewards += sum(1 for v in result.rewards.values()
                                if abs(v - 1.0) < 1e-9)
    assert deliveries == delivery_rewards


# -- observation features ----------------------------------------------------

def test_per_agent_dim_formula():
    # 4 dir + 4 inventory + 4 counters + 6 kinds * 2 deltas
    # + 2 pots * 10 + 2 teammate + 2 position = 48; two agents -> 96.
    audit = 4 + 4 + 4 + 6 * 2 + 2 * 10 + 2 + 2
    assert audit == 48
    assert overcooked.per_agent_obs_dim() == audit
    env, state, obs = fresh()
    assert env.features.per_agent_dim == audit
    assert all(len(v) == 96 for v in obs.values())


def test_initial_observation_frozen_values():
    _, _, obs = fresh()
    own = obs[0][:48]
    assert own[0:4] == [1.0, 0.0, 0.0, 0.0]          # facing right
    assert own[4:8] == [1.0, 0.0, 0.0, 0.0]          # empty hands
    assert own[8:12] == [0.0, 0.0, 0.0, 0.0]         # no adjacent counters
    assert own[12:24] == [0.0, 0.0,                   # no loose onion
                          0.0, 0.0,                   # no loose plate
                          2.0, -1.0,                  # plate stack (3,1)
                          0.0, -2.0,                  # onion stack (1,0)
                          0.0, 0.0,                   # no soup
                          2.0, 1.0]                   # delivery (3,3)
    assert own[24:34] == [1.0,                        # pot reachable
                          1.0, 0.0, 0.0,              # idle
                          0.0, 0.0,                   # onions, timer
                          -1.0, 0.0,                  # delta to pot
                          0.0, 2.0]                   # pot location
    assert own[34:44] == [0.0] * 10                   # padded second pot
    assert own[44:46] == [1.0, 0.0]                   # teammate below
    assert own[46:48] == [1.0, 2.0]                   # own cell


def test_facing_up_sets_last_direction_bit():
    env, state, _ = fresh()
    state, result = env.step(state, {0: UP, 1: NOOP})
    assert result.observations[0][0:4] == [0.0, 0.0, 0.0, 1.0]


def test_observation_length_constant_over_random_play():
    env, state, _ = fresh(seed=13)
    rng = CounterRng(55)
    for _ in range(200):
        state, result = env.step(state, {0: rng.randrange(7), 1: rng.randrange(7)})
        assert all(len(v) == 96 for v in result.observations.values())


# Independent oracles: a plain scan for closest-instance deltas and a
# from-scratch BFS for pot reachability.

def oracle_closest_delta(state, origin, kind_name):
    candidates = []
    for r in range(state.height):
        for c in range(state.width):
            pos = GridPos(r, c)
            for obj in (state.static_at(pos), state.item_at(pos)):
                if obj is not None and obj.kind.name == kind_name:
                    candidates.append(pos)
    best = None
    for pos in sorted(candidates):
        d = abs(pos.row - origin.row) + abs(pos.col - origin.col)
        if best is None or d < best[0]:
            best = (d, pos)
    if best is None:
        return (0.0, 0.0)
    return (float(best[1].row - origin.row), float(best[1].col - origin.col))


def oracle_pot_reachable(state, start, pot_pos):
    from collections import deque
    queue = deque([start])
    seen = {start}
    while queue:
        r, c = queue.popleft()
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            npos = GridPos(nr, nc)
            if npos in seen or not state.in_bounds(npos):
                continue
            if abs(nr - pot_pos.row) + abs(nc - pot_pos.col) == 1 \
                    and not state.blocks_movement(npos):
                return True
            if state.blocks_movement(npos):
                continue
            seen.add(npos)
            queue.append(npos)
    return abs(start.row - pot_pos.row) + abs(start.col - pot_pos.col) == 1


def test_delta_features_match_scan_oracle_on_random_states():
    env, state, _ = fresh(seed=3)
    rng = CounterRng(2718)
    kinds = ("onion", "plate", "plate_stack", "onion_stack",
             "onion_soup", "delivery_zone")
    for trial in range(50):
        for _ in range(6):
            state, result = env.step(
                state, {0: rng.randrange(7), 1: rng.randrange(7)})
        for agent in state.agents:
            vec = result.observations[agent.agent_id]
            deltas = vec[12:24]
            for i, name in enumerate(kinds):
                expected = oracle_closest_delta(state, agent.pos, name)
                got = (deltas[2 * i], deltas[2 * i + 1])
                assert got == expected, (
                    f"trial {trial} agent {agent.agent_id} kind {name}: "
                    f"{got} != {expected}")
            reachable = vec[24]
            want = oracle_pot_reachable(state, agent.pos, POT_POS)
            assert reachable == (1.0 if want else 0.0)
