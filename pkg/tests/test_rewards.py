"""Declarative reward rules on hand-built transitions."""

from gridplay.core import Direction, GridPos
from gridplay.env import EnvConfig, evaluate_rewards, rewards_by_name
from gridplay.envs import overcooked
from gridplay.envs.overcooked import (
    POT_ONIONS,
    POT_STATUS,
    POT_TIMER,
    SCOPE,
    STATUS_COOKING,
    STATUS_READY,
)


def kitchen(layout="XXPXX\nO1 2S\nXXXXX", seed=0):
    config = EnvConfig(name="k", scope=SCOPE, layout=layout,
                       features=[], rewards=list(overcooked.REWARD_SET),
                       max_ticks=100, seed=seed)
    env = overcooked.make_env(config)
    state, _ = env.reset()
    return env, state


def kind(state, name):
    return overcooked.state_kind(state, name)


def test_delivery_reward_fires():
    env, state = kitchen()
    agent = state.agent(1)  # at (1,3), delivery zone at (1,4)
    agent.inventory = kind(state, "onion_soup")
    agent.dir = Direction.RIGHT
    pickup = env.action_set.index("pickup_drop")
    noop = env.action_set.noop
    state, result = env.step(state, {0: noop, 1: pickup})
    assert result.rewards[1] == 1.0
    assert result.rewards[0] == 0.0
    assert state.agent(1).inventory is None
    assert result.infos[1]["delivered"] == 1


def test_noop_gives_zero():
    env, state = kitchen()
    noop = env.action_set.noop
    _, result = env.step(state, {0: noop, 1: noop})
    assert result.rewards == {0: 0.0, 1: 0.0}


def test_onion_into_full_pot_gives_zero():
    env, state = kitchen()
    pot = state.static_at(GridPos(0, 2))
    pot.state[POT_ONIONS] = 3
    pot.state[POT_STATUS] = STATUS_COOKING
    pot.state[POT_TIMER] = 10
    agent = state.agent(0)  # at (1,1)
    agent.pos = GridPos(1, 2)
    agent.dir = Direction.UP
    agent.inventory = kind(state, "onion")
    pickup = env.action_set.index("pickup_drop")
    noop = env.action_set.noop
    state, result = env.step(state, {0: pickup, 1: noop})
    assert result.rewards[0] == 0.0
    # Interaction is a no-op too: the onion stays in hand.
    assert state.agent(0).inventory.name == "onion"
    assert state.static_at(GridPos(0, 2)).state[POT_ONIONS] == 3


def test_onion_into_open_pot_rewards_tenth():
    env, state = kitchen()
    agent = state.agent(0)
    agent.pos = GridPos(1, 2)
    agent.dir = Direction.UP
    agent.inventory = kind(state, "onion")
    pickup = env.action_set.index("pickup_drop")
    noop = env.action_set.noop
    state, result = env.step(state, {0: pickup, 1: noop})
    assert result.rewards[0] == 0.1
    assert state.static_at(GridPos(0, 2)).state[POT_ONIONS] == 1


def test_plating_ready_pot_rewards_three_tenths():
    env, state = kitchen()
    pot = state.static_at(GridPos(0, 2))
    pot.state[POT_ONIONS] = 3
    pot.state[POT_STATUS] = STATUS_READY
    agent = state.agent(0)
    agent.pos = GridPos(1, 2)
    agent.dir = Direction.UP
    agent.inventory = kind(state, "plate")
    pickup = env.action_set.index("pickup_drop")
    noop = env.action_set.noop
    state, result = env.step(state, {0: pickup, 1: noop})
    assert result.rewards[0] == 0.3
    assert state.agent(0).inventory.name == "onion_soup"
    assert state.static_at(GridPos(0, 2)).state == [0, 0, 0]


def test_rule_needs_all_conditions():
    rules = rewards_by_name(SCOPE, ["soup_delivery"])
    env, state = kitchen()
    nxt = state.clone()
    # Right action, wrong holding.
    assert evaluate_rewards(rules, state, {0: "pickup_drop", 1: "noop"}, nxt) \
        == {0: 0.0, 1: 0.0}
    # Holding soup but facing nothing relevant.
    state.agent(0).inventory = kind(state, "onion_soup")
    state.agent(0).dir = Direction.DOWN
    assert evaluate_rewards(rules, state, {0: "pickup_drop", 1: "noop"}, nxt) \
        == {0: 0.0, 1: 0.0}


def test_reward_locality_under_permutation():
    # Swapping the identities of the *other* agents leaves agent 0's
    # reward unchanged when their states are identical under the swap.
    env, state = kitchen(layout="XXPXX\nO1 2S\n X3XX")
    rules = rewards_by_name(SCOPE, list(overcooked.REWARD_SET))
    state.agent(0).pos = GridPos(1, 2)
    state.agent(0).dir = Direction.UP
    state.agent(0).inventory = kind(state, "onion")
    swapped = state.clone()
    a1, a2 = swapped.agent(1), swapped.agent(2)
    a1.pos, a2.pos = a2.pos, a1.pos
    a1.dir, a2.dir = a2.dir, a1.dir
    base = evaluate_rewards(rules, state,
                            {0: "pickup_drop", 1: "noop", 2: "noop"}, state)
    perm = evaluate_rewards(rules, swapped,
                            {0: "pickup_drop", 1: "noop", 2: "noop"}, swapped)
    assert base[0] == perm[0] == 0.1
