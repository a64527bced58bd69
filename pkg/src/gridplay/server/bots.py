"""Scripted seat-filling policies.

These stand in for trained agents: the interface is a single act() call
so a learned policy can be dropped in behind the same name lookup.
"""

from __future__ import annotations

from collections import deque

from ..core.grid import DIR_VECTORS, GridPos, GridState, forward_pos
from ..core.rng import CounterRng
from ..env.environment import GridEnv
from ..envs.overcooked import POT_ONIONS, POT_STATUS, STATUS_IDLE, STATUS_READY


class Policy:
    name = "policy"

    def act(self, env: GridEnv, state: GridState, agent_id: int) -> int:
        raise NotImplementedError

    def reset(self, seed: int) -> None:
        pass


class NoopPolicy(Policy):
    name = "noop"

    def act(self, env, state, agent_id):
        return env.action_set.noop


class RandomPolicy(Policy):
    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = CounterRng(seed)

    def reset(self, seed: int) -> None:
        self.rng = CounterRng(seed)

    def act(self, env, state, agent_id):
        return self.rng.randrange(len(env.action_set))


def _bfs_step(state: GridState, start: GridPos, goals: set[GridPos],
              ignore_agents: bool = False) -> GridPos | None:
    """First step of a shortest path to any goal-adjacent cell.

    Returns None when unreachable or already adjacent.  With
    ignore_agents=False other agents are obstacles.
    """
    targets = set()
    for goal in goals:
        for dr, dc in DIR_VECTORS:
            cell = GridPos(goal.row + dr, goal.col + dc)
            if state.in_bounds(cell) and not state.blocks_movement(cell):
                targets.add(cell)
    if start in targets:
        return None
    occupied = set() if ignore_agents else \
        {a.pos for a in state.agents if a.pos != start}
    queue = deque([start])
    parents: dict[GridPos, GridPos] = {start: start}
    while queue:
        pos = queue.popleft()
        for dr, dc in DIR_VECTORS:
            nxt = GridPos(pos.row + dr, pos.col + dc)
            if nxt in parents or not state.in_bounds(nxt):
                continue
            if state.blocks_movement(nxt) or nxt in occupied:
                continue
            parents[nxt] = pos
            if nxt in targets:
                while parents[nxt] != start:
                    nxt = parents[nxt]
                return nxt
            queue.append(nxt)
    return None


def _move_toward(env: GridEnv, me_pos: GridPos, step: GridPos) -> int:
    acts = env.action_set
    if step.row < me_pos.row:
        return acts.index("move_up")
    if step.row > me_pos.row:
        return acts.index("move_down")
    if step.col < me_pos.col:
        return acts.index("move_left")
    return acts.index("move_right")


class OvercookedCycleBot(Policy):
    """Fetch onion, pot it three times, fetch a plate, serve, deliver.

    Navigation is deterministic BFS; when the agent stands next to its
    target but faces the wrong way, the blocked cardinal move turns it.
    Two cycle bots sharing a kitchen break movement contention with a
    phase-shifted backoff keyed to the tick counter, so a pair stays
    fully deterministic (each seat needs its own instance).
    """

    name = "overcooked_cycle"

    def __init__(self):
        self._last_intent: GridPos | None = None
        self._stuck = 0

    def reset(self, seed: int) -> None:
        self._last_intent = None
        self._stuck = 0

    def act(self, env, state, agent_id):
        acts = env.action_set
        me = state.agent(agent_id)
        if self._last_intent is not None and me.pos != self._last_intent:
            self._stuck += 1
        else:
            self._stuck = 0
        self._last_intent = None
        if self._stuck > 0 and (state.tick + 3 * agent_id) % 4 < 2:
            return acts.noop  # back off out of phase with the other chef
        holding = me.inventory.name if me.inventory else None
        pots = state.find_static("pot")
        if not pots:
            return acts.noop
        pot_pos, pot = min(
            pots, key=lambda item: abs(item[0].row - me.pos.row)
            + abs(item[0].col - me.pos.col))

        if holding == "onion_soup":
            target = self._closest(state, me.pos, "delivery_zone")
        elif holding == "onion":
            if pot.state[POT_STATUS] == STATUS_IDLE and pot.state[POT_ONIONS] < 3:
                target = pot_pos
            else:
                target = None  # pot busy; hold the onion and wait
        elif holding == "plate":
            target = pot_pos if pot.state[POT_STATUS] == STATUS_READY else None
        else:
            if pot.state[POT_STATUS] == STATUS_IDLE and pot.state[POT_ONIONS] < 3:
                target = self._closest(state, me.pos, "onion_stack")
            else:
                target = self._closest(state, me.pos, "plate_stack")

        if target is None:
            return acts.noop
        if self._adjacent(me.pos, target):
            if forward_pos(me.pos, me.dir) == target:
                return acts.index("pickup_drop")
            return _move_toward(env, me.pos, target)  # blocked move = turn
        step = _bfs_step(state, me.pos, {target})
        if step is not None:
            return self._move(env, state, me.pos, step)
        if _bfs_step(state, me.pos, {target}, ignore_agents=True) is None:
            return acts.noop  # truly unreachable
        # Another chef blocks every path. Carriers hold their ground and
        # wait; empty hands yield by stepping to any free cell.
        if holding is not None:
            return acts.noop
        for dr, dc in DIR_VECTORS:
            cell = GridPos(me.pos.row + dr, me.pos.col + dc)
            if state.in_bounds(cell) and not state.blocks_movement(cell) \
                    and state.agent_at(cell) is None:
                return self._move(env, state, me.pos, cell)
        return acts.noop

    def _move(self, env, state, me_pos, step):
        if state.in_bounds(step) and not state.blocks_movement(step):
            self._last_intent = step
        return _move_toward(env, me_pos, step)

    @staticmethod
    def _closest(state: GridState, origin: GridPos,
                 kind_name: str) -> GridPos | None:
        best = None
        for pos, _ in state.find_static(kind_name):
            d = abs(pos.row - origin.row) + abs(pos.col - origin.col)
            if best is None or (d, pos) < best:
                best = (d, pos)
        return None if best is None else best[1]

    @staticmethod
    def _adjacent(a: GridPos, b: GridPos) -> bool:
        return abs(a.row - b.row) + abs(a.col - b.col) == 1


def make_policy(name: str, seed: int = 0) -> Policy:
    if name == "noop":
        return NoopPolicy()
    if name == "random":
        return RandomPolicy(seed)
    if name == "overcooked_cycle":
        return OvercookedCycleBot()
    raise ValueError(f"unknown bot policy {name!r}")
