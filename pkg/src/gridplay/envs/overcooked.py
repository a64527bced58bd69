"""Two-chef onion soup kitchen.

Chefs ferry onions from a stack into a pot; three onions cook into a
soup, which is plated and carried to the delivery zone.  Shaped rewards:
0.1 per onion potted, 0.3 per soup plated, 1.0 per delivery.

Layout characters:
  ``#`` wall   ``X`` counter   ``P`` pot       ``O`` onion stack
  ``D`` plate stack   ``S`` delivery zone
  ``o`` onion  ``p`` plate     ``s`` onion soup (portable items)
"""

from __future__ import annotations

from ..core.grid import (
    DIR_VECTORS,
    AgentState,
    GridPos,
    GridState,
    forward_pos,
)
from ..core.objects import ObjectInstance, ObjectKind, default_registry
from ..env.config import EnvConfig
from ..env.environment import GridEnv, InteractionHooks
from ..env.features import register_feature
from ..env.rewards import RewardRule, register_reward

SCOPE = "overcooked"

DEFAULT_COOK_TIME = 20
DEFAULT_POTS_CONSIDERED = 2

# Pot instance state: [onions, timer, status].
POT_ONIONS = 0
POT_TIMER = 1
POT_STATUS = 2

STATUS_IDLE = 0
STATUS_COOKING = 1
STATUS_READY = 2

ONION_REWARD = 0.1
PLATE_REWARD = 0.3
DELIVERY_REWARD = 1.0

CRAMPED_ROOM_LAYOUT = "\n".join([
    "XXPXX",
    "O 1 X",
    "X 2 X",
    "XDXSX",
])

_INVENTORY_KINDS = ("onion", "plate", "onion_soup")
_DELTA_TARGET_KINDS = ("onion", "plate", "plate_stack", "onion_stack",
                       "onion_soup", "delivery_zone")


def _register_kinds() -> None:
    for kind in (
        ObjectKind("wall", SCOPE, "#", color="grey", blocks_movement=True),
        ObjectKind("counter", SCOPE, "X", color="tan", blocks_movement=True),
        ObjectKind("pot", SCOPE, "P", color="grey", blocks_movement=True,
                   state_init=(0, 0, 0)),
        ObjectKind("onion_stack", SCOPE, "O", color="yellow", blocks_movement=True),
        ObjectKind("plate_stack", SCOPE, "D", color="white", blocks_movement=True),
        ObjectKind("delivery_zone", SCOPE, "S", color="green", blocks_movement=True),
        ObjectKind("onion", SCOPE, "o", color="yellow", can_pickup=True),
        ObjectKind("plate", SCOPE, "p", color="white", can_pickup=True),
        ObjectKind("onion_soup", SCOPE, "s", color="orange", can_pickup=True),
    ):
        default_registry.register(kind)


def pot_has_capacity(prev: GridState, agent_id: int, faced: GridPos) -> bool:
    pot = prev.static_at(faced)
    return (pot is not None and pot.kind.name == "pot"
            and pot.state[POT_STATUS] == STATUS_IDLE
            and pot.state[POT_ONIONS] < 3)


def pot_is_ready(prev: GridState, agent_id: int, faced: GridPos) -> bool:
    pot = prev.static_at(faced)
    return (pot is not None and pot.kind.name == "pot"
            and pot.state[POT_STATUS] == STATUS_READY)


def _register_rewards() -> None:
    register_reward(SCOPE, RewardRule(
        name="onion_in_pot", action="pickup_drop", value=ONION_REWARD,
        holds="onion", faces="pot", extra_condition=pot_has_capacity))
    register_reward(SCOPE, RewardRule(
        name="soup_plated", action="pickup_drop", value=PLATE_REWARD,
        holds="plate", faces="pot", extra_condition=pot_is_ready))
    register_reward(SCOPE, RewardRule(
        name="soup_delivery", action="pickup_drop", value=DELIVERY_REWARD,
        holds="onion_soup", faces="delivery_zone"))


class OvercookedHooks(InteractionHooks):
    def __init__(self, cook_time: int = DEFAULT_COOK_TIME):
        self.cook_time = cook_time

    def pickup_drop(self, state: GridState, agent: AgentState) -> bool:
        faced = forward_pos(agent.pos, agent.dir)
        if not state.in_bounds(faced) or state.agent_at(faced) is not None:
            return True
        static = state.static_at(faced)
        item = state.item_at(faced)
        static_name = static.kind.name if static else None

        if agent.inventory is None:
            if item is not None and item.kind.can_pickup:
                state.set_item(faced, None)
                agent.inventory = item.kind
            elif static_name == "onion_stack":
                agent.inventory = state_kind(state, "onion")
            elif static_name == "plate_stack":
                agent.inventory = state_kind(state, "plate")
            return True

        held = agent.inventory.name
        if static_name == "pot":
            pot = static
            if held == "onion" and pot.state[POT_STATUS] == STATUS_IDLE \
                    and pot.state[POT_ONIONS] < 3:
                pot.state[POT_ONIONS] += 1
                agent.inventory = None
            elif held == "plate" and pot.state[POT_STATUS] == STATUS_READY:
                agent.inventory = state_kind(state, "onion_soup")
                pot.state[POT_ONIONS] = 0
                pot.state[POT_TIMER] = 0
                pot.state[POT_STATUS] = STATUS_IDLE
        elif static_name == "delivery_zone":
            if held == "onion_soup":
                agent.inventory = None
        elif static_name == "counter":
            if item is None:
                state.set_item(faced, ObjectInstance(agent.inventory))
                agent.inventory = None
        # Dropping on open floor is not part of this kitchen.
        return True

    def advance_timers(self, state: GridState) -> None:
        # Cooking starts in the timer phase, one phase after the third
        # onion lands, so the timer reads cook_time at the end of that
        # tick and READY appears exactly cook_time ticks later.
        for _, pot in state.find_static("pot"):
            status = pot.state[POT_STATUS]
            if status == STATUS_IDLE and pot.state[POT_ONIONS] == 3:
                if self.cook_time <= 0:
                    pot.state[POT_STATUS] = STATUS_READY
                else:
                    pot.state[POT_STATUS] = STATUS_COOKING
                    pot.state[POT_TIMER] = self.cook_time
            elif status == STATUS_COOKING:
                pot.state[POT_TIMER] -= 1
                if pot.state[POT_TIMER] <= 0:
                    pot.state[POT_TIMER] = 0
                    pot.state[POT_STATUS] = STATUS_READY

    def step_infos(self, prev: GridState, action_names: dict[int, str],
                   state: GridState) -> dict[int, dict]:
        infos: dict[int, dict] = {}
        for agent in prev.agents:
            delivered = 0
            if action_names.get(agent.agent_id) == "pickup_drop" \
                    and agent.inventory is not None \
                    and agent.inventory.name == "onion_soup":
                faced = prev.static_at(forward_pos(agent.pos, agent.dir))
                if faced is not None and faced.kind.name == "delivery_zone":
                    delivered = 1
            infos[agent.agent_id] = {"delivered": delivered}
        return infos


def state_kind(state: GridState, name: str) -> ObjectKind:
    return default_registry.by_name(state.scope, name)


# -- observation features ---------------------------------------------------

def _one_hot(index: int, size: int) -> list[float]:
    out = [0.0] * size
    if 0 <= index < size:
        out[index] = 1.0
    return out


def _kind_positions(state: GridState, name: str) -> list[GridPos]:
    static = [pos for pos, _ in state.find_static(name)]
    items = [pos for pos, _ in state.find_items(name)]
    return sorted(static + items)


def closest_delta(state: GridState, origin: GridPos, name: str) -> tuple[int, int]:
    """Signed (drow, dcol) to the closest instance by Manhattan distance.

    Ties break on smallest (row, col); (0, 0) when none exists.
    """
    best: tuple[int, GridPos] | None = None
    for pos in _kind_positions(state, name):
        dist = abs(pos.row - origin.row) + abs(pos.col - origin.col)
        if best is None or (dist, pos) < best:
            best = (dist, pos)
    if best is None:
        return (0, 0)
    pos = best[1]
    return (pos.row - origin.row, pos.col - origin.col)


def reachable_cells(state: GridState, start: GridPos) -> set[GridPos]:
    """BFS flood fill over non-blocking cells, ignoring agents."""
    seen = {start}
    frontier = [start]
    while frontier:
        nxt: list[GridPos] = []
        for pos in frontier:
            for dr, dc in DIR_VECTORS:
                npos = GridPos(pos.row + dr, pos.col + dc)
                if npos in seen or not state.in_bounds(npos):
                    continue
                if state.blocks_movement(npos):
                    continue
                seen.add(npos)
                nxt.append(npos)
        frontier = nxt
    return seen


def pot_reachable(state: GridState, start: GridPos, pot_pos: GridPos) -> bool:
    reach = reachable_cells(state, start)
    for dr, dc in DIR_VECTORS:
        if GridPos(pot_pos.row + dr, pot_pos.col + dc) in reach:
            return True
    return False


def _register_features() -> None:
    def agent_dir(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            return _one_hot(int(state.agent(agent_id).dir), 4)
        return 4, extract

    def inventory_onehot(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            inv = state.agent(agent_id).inventory
            index = 0 if inv is None else 1 + _INVENTORY_KINDS.index(inv.name)
            return _one_hot(index, 1 + len(_INVENTORY_KINDS))
        return 4, extract

    def adjacent_counters(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            pos = state.agent(agent_id).pos
            out = []
            for dr, dc in DIR_VECTORS:
                cell = state.static_at(GridPos(pos.row + dr, pos.col + dc))
                out.append(1.0 if cell is not None and cell.kind.name == "counter"
                           else 0.0)
            return out
        return 4, extract

    def closest_object_deltas(config: EnvConfig):
        dim = 2 * len(_DELTA_TARGET_KINDS)

        def extract(state: GridState, agent_id: int) -> list[float]:
            origin = state.agent(agent_id).pos
            out: list[float] = []
            for name in _DELTA_TARGET_KINDS:
                dr, dc = closest_delta(state, origin, name)
                out.extend((float(dr), float(dc)))
            return out
        return dim, extract

    def pot_features(config: EnvConfig):
        pots_considered = config.param("pots_considered", DEFAULT_POTS_CONSIDERED)
        dim = 10 * pots_considered

        def extract(state: GridState, agent_id: int) -> list[float]:
            origin = state.agent(agent_id).pos
            pots = state.find_static("pot")[:pots_considered]
            out: list[float] = []
            for pos, pot in pots:
                out.append(1.0 if pot_reachable(state, origin, pos) else 0.0)
                out.extend(_one_hot(pot.state[POT_STATUS], 3))
                out.append(float(pot.state[POT_ONIONS]))
                out.append(float(pot.state[POT_TIMER]))
                out.extend((float(pos.row - origin.row), float(pos.col - origin.col)))
                out.extend((float(pos.row), float(pos.col)))
            out.extend([0.0] * (10 * (pots_considered - len(pots))))
            return out
        return dim, extract

    def other_chef_delta(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            origin = state.agent(agent_id).pos
            best: tuple[int, int, GridPos] | None = None
            for other in state.agents:
                if other.agent_id == agent_id:
                    continue
                dist = (abs(other.pos.row - origin.row)
                        + abs(other.pos.col - origin.col))
                key = (dist, other.agent_id, other.pos)
                if best is None or key < best:
                    best = key
            if best is None:
                return [0.0, 0.0]
            pos = best[2]
            return [float(pos.row - origin.row), float(pos.col - origin.col)]
        return 2, extract

    def own_position(config: EnvConfig):
        def extract(state: GridState, agent_id: int) -> list[float]:
            pos = state.agent(agent_id).pos
            return [float(pos.row), float(pos.col)]
        return 2, extract

    register_feature(SCOPE, "agent_dir", agent_dir)
    register_feature(SCOPE, "inventory_onehot", inventory_onehot)
    register_feature(SCOPE, "adjacent_counters", adjacent_counters)
    register_feature(SCOPE, "closest_object_deltas", closest_object_deltas)
    register_feature(SCOPE, "pot_features", pot_features)
    register_feature(SCOPE, "other_chef_delta", other_chef_delta)
    register_feature(SCOPE, "own_position", own_position)


FEATURE_SET = [
    "agent_dir",
    "inventory_onehot",
    "adjacent_counters",
    "closest_object_deltas",
    "pot_features",
    "other_chef_delta",
    "own_position",
]

REWARD_SET = ["onion_in_pot", "soup_plated", "soup_delivery"]


def per_agent_obs_dim(pots_considered: int = DEFAULT_POTS_CONSIDERED) -> int:
    return 4 + 4 + 4 + 2 * len(_DELTA_TARGET_KINDS) + 10 * pots_considered + 2 + 2


def cramped_room_config(seed: int = 0, cook_time: int = DEFAULT_COOK_TIME,
                        max_ticks: int = 400) -> EnvConfig:
    return EnvConfig(
        name="cramped_room",
        scope=SCOPE,
        layout=CRAMPED_ROOM_LAYOUT,
        features=list(FEATURE_SET),
        rewards=list(REWARD_SET),
        max_ticks=max_ticks,
        seed=seed,
        params={"cook_time": cook_time,
                "pots_considered": DEFAULT_POTS_CONSIDERED},
    )


def make_env(config: EnvConfig) -> GridEnv:
    hooks = OvercookedHooks(cook_time=config.param("cook_time", DEFAULT_COOK_TIME))
    return GridEnv(config, hooks=hooks)


def make_cramped_room(seed: int = 0, cook_time: int = DEFAULT_COOK_TIME,
                      max_ticks: int = 400) -> GridEnv:
    return make_env(cramped_room_config(seed, cook_time, max_ticks))


_register_kinds()
_register_rewards()
_register_features()
