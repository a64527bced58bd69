"""Two-agent search and rescue.

Victims come in three severities: green victims need a plain toggle,
yellow ones a rescuer holding the med kit, and red ones are only rescued
when both agents toggle them on the same tick.  Rubble is cleared with
the pickaxe and the door opens (permanently) with the key.

Layout characters:
  ``#`` wall   ``g``/``y``/``r`` victims   ``x`` rubble   ``d`` door
  ``t`` pickaxe   ``k`` key   ``m`` med kit (portable items)
"""

from __future__ import annotations

from ..core.grid import AgentState, GridPos, GridState, forward_pos
from ..core.objects import ObjectKind, default_registry
from ..env.config import EnvConfig
from ..env.environment import GridEnv, InteractionHooks
from ..env.features import register_feature
from .overcooked import _one_hot, closest_delta

SCOPE = "search_rescue"

VICTIM_KINDS = ("victim_green", "victim_yellow", "victim_red")
ITEM_KINDS = ("pickaxe", "key", "med_kit")

DEFAULT_RESCUE_REWARD = 1.0

# Door instance state: [open].
DOOR_OPEN = 0

DEFAULT_LAYOUT = "\n".join([
    "#########",
    "#1t x g #",
    "#k  d m #",
    "#  y r 2#",
    "#########",
])


def _register_kinds() -> None:
    for kind in (
        ObjectKind("wall", SCOPE, "#", color="grey", blocks_movement=True),
        ObjectKind("victim_green", SCOPE, "g", color="green",
                   can_toggle=True, blocks_movement=True),
        ObjectKind("victim_yellow", SCOPE, "y", color="yellow",
                   can_toggle=True, blocks_movement=True),
        ObjectKind("victim_red", SCOPE, "r", color="red",
                   can_toggle=True, blocks_movement=True),
        ObjectKind("rubble", SCOPE, "x", color="brown",
                   can_toggle=True, blocks_movement=True),
        ObjectKind("door", SCOPE, "d", color="blue", can_toggle=True,
                   blocks_movement=True, state_init=(0,),
                   blocks_when=lambda st: st[DOOR_OPEN] == 0),
        ObjectKind("pickaxe", SCOPE, "t", color="grey", can_pickup=True),
        ObjectKind("key", SCOPE, "k", color="gold", can_pickup=True),
        ObjectKind("med_kit", SCOPE, "m", color="red", can_pickup=True),
    ):
        default_registry.register(kind)


class SearchRescueHooks(InteractionHooks):
    """Toggle logic; pickup/drop uses the default floor semantics."""

    def __init__(self, rescue_reward: float = DEFAULT_RESCUE_REWARD):
        self.rescue_reward = rescue_reward

    def toggles(self, state: GridState,
                togglers: list[AgentState]) -> dict[int, float]:
        rewards: dict[int, float] = {}
        red_togglers: dict[GridPos, list[int]] = {}

        for agent in sorted(togglers, key=lambda a: a.agent_id):
            faced = forward_pos(agent.pos, agent.dir)
            target = state.static_at(faced)
            if target is None:
                continue
            name = target.kind.name
            holding = agent.inventory.name if agent.inventory else None
            if name == "rubble" and holding == "pickaxe":
                state.set_static(faced, None)
            elif name == "door" and holding == "key":
                target.state[DOOR_OPEN] = 1
            elif name == "victim_green":
                state.set_static(faced, None)
                rewards[agent.agent_id] = rewards.get(agent.agent_id, 0.0) \
                    + self.rescue_reward
            elif name == "victim_yellow" and holding == "med_kit":
                state.set_static(faced, None)
                rewards[agent.agent_id] = rewards.get(agent.agent_id, 0.0) \
                    + self.rescue_reward
            elif name == "victim_red":
                red_togglers.setdefault(faced, []).append(agent.agent_id)

        # Red victims need at least two distinct rescuers on the same tick.
        for faced in sorted(red_togglers):
            rescuers = sorted(set(red_togglers[faced]))
            if len(rescuers) >= 2:
                state.set_static(faced, None)
                for agent_id in rescuers:
                    rewards[agent_id] = rewards.get(agent_id, 0.0) \
                        + self.rescue_reward
        return rewards

    def step_infos(self, prev: GridState, action_names: dict[int, str],
                   state: GridState) -> dict[int, dict]:
        remaining = sum(state.census().get(k, 0) for k in VICTIM_KINDS)
        before = sum(prev.census().get(k, 0) for k in VICTIM_KINDS)
        return {agent.agent_id: {"victims_remaining": remaining,
                                 "rescued_this_tick": before - remaining}
                for agent in state.agents}


def _register_features() -> None:
    def agent_dir(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            return _one_hot(int(state.agent(agent_id).dir), 4)
        return 4, extract

    def inventory_onehot(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            inv = state.agent(agent_id).inventory
            index = 0 if inv is None else 1 + ITEM_KINDS.index(inv.name)
            return _one_hot(index, 1 + len(ITEM_KINDS))
        return 4, extract

    target_kinds = VICTIM_KINDS + ("rubble", "door") + ITEM_KINDS

    def closest_target_deltas(config: EnvConfig):
        dim = 2 * len(target_kinds)

        def extract(state: GridState, agent_id: int) -> list[float]:
            origin = state.agent(agent_id).pos
            out: list[float] = []
            for name in target_kinds:
                dr, dc = closest_delta(state, origin, name)
                out.extend((float(dr), float(dc)))
            return out
        return dim, extract

    def teammate_delta(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            origin = state.agent(agent_id).pos
            for other in state.agents:
                if other.agent_id != agent_id:
                    return [float(other.pos.row - origin.row),
                            float(other.pos.col - origin.col)]
            return [0.0, 0.0]
        return 2, extract

    def own_position(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            pos = state.agent(agent_id).pos
            return [float(pos.row), float(pos.col)]
        return 2, extract

    register_feature(SCOPE, "agent_dir", agent_dir)
    register_feature(SCOPE, "inventory_onehot", inventory_onehot)
    register_feature(SCOPE, "closest_target_deltas", closest_target_deltas)
    register_feature(SCOPE, "teammate_delta", teammate_delta)
    register_feature(SCOPE, "own_position", own_position)


FEATURE_SET = [
    "agent_dir",
    "inventory_onehot",
    "closest_target_deltas",
    "teammate_delta",
    "own_position",
]


def per_agent_obs_dim() -> int:
    return 4 + 4 + 2 * (len(VICTIM_KINDS) + 2 + len(ITEM_KINDS)) + 2 + 2


def search_rescue_config(seed: int = 0, max_ticks: int = 500) -> EnvConfig:
    return EnvConfig(
        name="search_rescue",
        scope=SCOPE,
        layout=DEFAULT_LAYOUT,
        features=list(FEATURE_SET),
        rewards=[],
        max_ticks=max_ticks,
        seed=seed,
    )


def make_env(config: EnvConfig) -> GridEnv:
    return GridEnv(config, hooks=SearchRescueHooks())


def make_search_rescue(seed: int = 0, max_ticks: int = 500) -> GridEnv:
    return make_env(search_rescue_config(seed, max_ticks))


_register_kinds()
_register_features()
