"""Multi-agent environment lifecycle: reset, step, phase ordering.

Each step applies a fixed phase order so that replay and rollback
re-simulation are bit-identical:

  1. validate actions          5. toggle interactions (ascending id)
  2. rotations / facing        6. object timers
  3. simultaneous movement     7. rewards (on the prev -> next transition)
  4. pickup/drop (ascending)   8. observations

Environments customize phases 4-6 and the per-step infos through an
InteractionHooks subclass; everything else is shared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core.grid import (
    AgentState,
    Direction,
    GridState,
    LayoutError,
    forward_pos,
    parse_ascii_layout,
    resolve_moves,
)
from ..core.objects import ObjectInstance, Registry, default_registry
from .actions import ActionMode, ActionSet, InvalidAction, action_set_for
from .config import EnvConfig, InvalidConfig
from .features import ComposedFeatures, UnknownFeature, compose_features
from .rewards import UnknownReward, evaluate_rewards, rewards_by_name


class MissingAction(Exception):
    pass


_CARDINAL_DIRS = {
    "move_up": Direction.UP,
    "move_down": Direction.DOWN,
    "move_left": Direction.LEFT,
    "move_right": Direction.RIGHT,
}


@dataclass
class StepResult:
    observations: dict[int, list[float]]
    rewards: dict[int, float]
    terminated: bool
    truncated: bool
    infos: dict[int, dict] = field(default_factory=dict)


class InteractionHooks:
    """Environment-specific interaction logic. Default: inert world."""

    def pickup_drop(self, state: GridState, agent: AgentState) -> bool:
        """Handle a pickup/drop attempt. Return True when consumed."""
        return False

    def toggles(self, state: GridState,
                togglers: list[AgentState]) -> dict[int, float]:
        """Handle all toggle actions of the tick. Returns extra rewards."""
        return {}

    def advance_timers(self, state: GridState) -> None:
        pass

    def step_infos(self, prev: GridState, action_names: dict[int, str],
                   state: GridState) -> dict[int, dict]:
        return {agent.agent_id: {} for agent in state.agents}


def default_pickup_drop(state: GridState, agent: AgentState) -> None:
    """Floor semantics: grab a portable item ahead, or set one down."""
    faced = forward_pos(agent.pos, agent.dir)
    if not state.in_bounds(faced) or state.agent_at(faced) is not None:
        return
    if agent.inventory is None:
        item = state.item_at(faced)
        if item is not None and item.kind.can_pickup:
            state.set_item(faced, None)
            agent.inventory = item.kind
    else:
        if state.item_at(faced) is None and state.static_at(faced) is None:
            state.set_item(faced, ObjectInstance(agent.inventory))
            agent.inventory = None


class GridEnv:
    """A configured environment instance.

    The instance itself is immutable after construction; all mutable
    simulation state lives in the GridState passed through reset/step, so
    snapshot/restore of that state is a complete save/load.
    """

    def __init__(self, config: EnvConfig, hooks: InteractionHooks | None = None,
                 registry: Registry | None = None):
        self.config = config
        self.hooks = hooks or InteractionHooks()
        self.registry = registry or default_registry
        self.action_set: ActionSet = action_set_for(config.action_mode)
        try:
            self.features: ComposedFeatures = compose_features(config.features, config)
            self.rules = rewards_by_name(config.scope, config.rewards)
        except (UnknownFeature, UnknownReward) as exc:
            raise InvalidConfig(str(exc)) from None
        try:
            probe = parse_ascii_layout(config.layout, config.scope,
                                       seed=config.seed, registry=self.registry)
        except LayoutError as exc:
            raise InvalidConfig(str(exc)) from None
        self.num_agents = len(probe.agents)
        if self.num_agents == 0:
            raise InvalidConfig("layout has no agent spawns")

    def reset(self, seed: int | None = None) -> tuple[GridState, dict[int, list[float]]]:
        state = parse_ascii_layout(
            self.config.layout, self.config.scope,
            seed=self.config.seed if seed is None else seed,
            registry=self.registry,
        )
        return state, self._observations(state)

    def step(self, state: GridState,
             actions: dict[int, int]) -> tuple[GridState, StepResult]:
        ids = [agent.agent_id for agent in state.agents]
        for agent_id in ids:
            if agent_id not in actions:
                raise MissingAction(f"no action for agent {agent_id}")
        for agent_id, action in actions.items():
            if agent_id not in ids:
                raise InvalidAction(f"action for unknown agent {agent_id}")
            if not 0 <= action < len(self.action_set):
                raise InvalidAction(f"action id {action} out of range")
        action_names = {aid: self.action_set.name(actions[aid]) for aid in ids}

        prev = state.clone()

        # Phase 2: rotation / facing. Cardinal moves set facing even when
        # the movement itself ends up blocked.
        for agent_id in ids:
            agent = state.agent(agent_id)
            name = action_names[agent_id]
            if self.action_set.mode is ActionMode.ROTATIONAL:
                if name == "turn_left":
                    agent.dir = agent.dir.left()
                elif name == "turn_right":
                    agent.dir = agent.dir.right()
            elif name in _CARDINAL_DIRS:
                agent.dir = _CARDINAL_DIRS[name]

        # Phase 3: simultaneous movement.
        proposals = {}
        for agent_id in ids:
            name = action_names[agent_id]
            moving = (name == "move_forward"
                      if self.action_set.mode is ActionMode.ROTATIONAL
                      else name in _CARDINAL_DIRS)
            if moving:
                agent = state.agent(agent_id)
                proposals[agent_id] = forward_pos(agent.pos, agent.dir)
        if proposals:
            resolve_moves(state, proposals)

        # Phase 4: pickup/drop in ascending agent id.
        for agent_id in ids:
            if action_names[agent_id] == "pickup_drop":
                agent = state.agent(agent_id)
                if not self.hooks.pickup_drop(state, agent):
                    default_pickup_drop(state, agent)

        # Phase 5: toggles, handled together so same-tick coordination
        # (e.g. simultaneous rescues) can be detected.
        togglers = [state.agent(agent_id) for agent_id in ids
                    if action_names[agent_id] == "toggle"]
        handler_rewards = self.hooks.toggles(state, togglers) if togglers else {}

        # Phase 6: object timers.
        self.hooks.advance_timers(state)

        state.tick += 1
        truncated = state.tick >= self.config.max_ticks

        # Phase 7: rewards on the transition.
        rewards = evaluate_rewards(self.rules, prev, action_names, state)
        for agent_id, value in handler_rewards.items():
            rewards[agent_id] = rewards.get(agent_id, 0.0) + value

        # Phase 8: observations.
        observations = self._observations(state)
        infos = self.hooks.step_infos(prev, action_names, state)
        return state, StepResult(observations, rewards, False, truncated, infos)

    def _observations(self, state: GridState) -> dict[int, list[float]]:
        if not self.config.features:
            return {agent.agent_id: [] for agent in state.agents}
        return {agent.agent_id: self.features.observe(state, agent.agent_id)
                for agent in state.agents}
