// Step pipeline with the fixed phase order shared with the server:
// validate, rotations/facing, simultaneous movement, pickup/drop,
// toggles, timers, tick, rewards, infos. Observation features are a
// training concern and are not computed client side.

import { EnvConfig } from "./config.js";
import {
  AgentState,
  Direction,
  GridState,
  forwardPos,
  parseAsciiLayout,
  resolveMoves,
} from "./grid.js";
import { ObjectInstance, Registry, defaultRegistry, makeInstance } from "./objects.js";
import { episodeSeed } from "./rng.js";

export const ROTATIONAL_ACTIONS =
  ["turn_left", "turn_right", "move_forward", "pickup_drop", "toggle", "noop"] as const;
export const CARDINAL_ACTIONS =
  ["move_up", "move_down", "move_left", "move_right", "pickup_drop", "toggle", "noop"] as const;

const CARDINAL_DIRS: Record<string, Direction> = {
  move_up: Direction.Up,
  move_down: Direction.Down,
  move_left: Direction.Left,
  move_right: Direction.Right,
};

export interface StepResult {
  rewards: Map<number, number>;
  terminated: boolean;
  truncated: boolean;
  infos: Map<number, Record<string, number>>;
}

export interface RewardRule {
  name: string;
  action: string;
  value: number;
  holds?: string;
  faces?: string;
  extraCondition?: (prev: GridState, agentId: number, faced: readonly [number, number]) => boolean;
}

export interface Hooks {
  // Return true when the interaction was consumed.
  pickupDrop?(state: GridState, agent: AgentState): boolean;
  toggles?(state: GridState, togglers: AgentState[]): Map<number, number>;
  advanceTimers?(state: GridState): void;
  stepInfos?(prev: GridState, actionNames: Map<number, string>,
             state: GridState): Map<number, Record<string, number>>;
}

export function defaultPickupDrop(state: GridState, agent: AgentState): void {
  const faced = forwardPos(agent.pos, agent.dir);
  if (!state.inBounds(faced) || state.agentAt(faced) !== null) return;
  if (agent.inventory === null) {
    const item = state.itemAt(faced);
    if (item !== null && item.kind.canPickup) {
      state.setItem(faced, null);
      agent.inventory = item.kind;
    }
  } else if (state.itemAt(faced) === null && state.staticAt(faced) === null) {
    state.setItem(faced, makeInstance(agent.inventory));
    agent.inventory = null;
  }
}

function facedKindMatches(prev: GridState, pos: readonly [number, number],
                          kindName: string): boolean {
  const staticObj = prev.staticAt(pos);
  if (staticObj !== null && staticObj.kind.name === kindName) return true;
  const item = prev.itemAt(pos);
  return item !== null && item.kind.name === kindName;
}

function cloneState(state: GridState): GridState {
  const out = new GridState(state.width, state.height, state.scope,
                            state.rng.clone());
  const cloneObj = (o: ObjectInstance | null) =>
    o === null ? null : { kind: o.kind, state: [...o.state] };
  out.staticLayer = state.staticLayer.map(cloneObj);
  out.itemLayer = state.itemLayer.map(cloneObj);
  out.agents = state.agents.map((a) => ({ ...a }));
  out.tick = state.tick;
  return out;
}

export class GridEnv {
  readonly actions: readonly string[];
  readonly noop: number;

  constructor(
    readonly config: EnvConfig,
    readonly rules: RewardRule[],
    readonly hooks: Hooks,
    readonly registry: Registry = defaultRegistry,
  ) {
    this.actions = config.actionMode === "rotational"
      ? ROTATIONAL_ACTIONS : CARDINAL_ACTIONS;
    this.noop = this.actions.indexOf("noop");
  }

  reset(seed?: bigint | number): GridState {
    return parseAsciiLayout(this.config.layout, this.config.scope,
                            seed ?? BigInt(this.config.seed), this.registry);
  }

  resetEpisode(baseSeed: bigint | number, episode: number): GridState {
    return this.reset(episodeSeed(baseSeed, episode));
  }

  step(state: GridState, actions: Map<number, number>): StepResult {
    const ids = state.agents.map((a) => a.agentId);
    const actionNames = new Map<number, string>();
    for (const id of ids) {
      const action = actions.get(id);
      if (action === undefined) throw new Error(`no action for agent ${id}`);
      if (action < 0 || action >= this.actions.length) {
        throw new Error(`action id ${action} out of range`);
      }
      actionNames.set(id, this.actions[action]);
    }

    const prev = cloneState(state);

    // Phase 2: rotations / facing.
    for (const id of ids) {
      const agent = state.agent(id);
      const name = actionNames.get(id)!;
      if (this.config.actionMode === "rotational") {
        if (name === "turn_left") agent.dir = ((agent.dir + 3) % 4) as Direction;
        else if (name === "turn_right") agent.dir = ((agent.dir + 1) % 4) as Direction;
      } else if (name in CARDINAL_DIRS) {
        agent.dir = CARDINAL_DIRS[name];
      }
    }

    // Phase 3: simultaneous movement.
    const proposals = new Map<number, readonly [number, number]>();
    for (const id of ids) {
      const name = actionNames.get(id)!;
      const moving = this.config.actionMode === "rotational"
        ? name === "move_forward" : name in CARDINAL_DIRS;
      if (moving) {
        const agent = state.agent(id);
        proposals.set(id, forwardPos(agent.pos, agent.dir));
      }
    }
    if (proposals.size) resolveMoves(state, proposals);

    // Phase 4: pickup/drop ascending.
    for (const id of ids) {
      if (actionNames.get(id) === "pickup_drop") {
        const agent = state.agent(id);
        const handled = this.hooks.pickupDrop?.(state, agent) ?? false;
        if (!handled) defaultPickupDrop(state, agent);
      }
    }

    // Phase 5: toggles, collected per tick.
    const togglers = ids.filter((id) => actionNames.get(id) === "toggle")
      .map((id) => state.agent(id));
    const handlerRewards = togglers.length
      ? (this.hooks.toggles?.(state, togglers) ?? new Map<number, number>())
      : new Map<number, number>();

    // Phase 6: timers.
    this.hooks.advanceTimers?.(state);

    state.tick += 1;
    const truncated = state.tick >= this.config.maxTicks;

    // Phase 7: rewards.
    const rewards = new Map<number, number>(ids.map((id) => [id, 0]));
    for (const id of ids) {
      const actionName = actionNames.get(id)!;
      for (const rule of this.rules) {
        if (this.ruleFires(rule, prev, id, actionName)) {
          rewards.set(id, rewards.get(id)! + rule.value);
        }
      }
    }
    for (const [id, value] of handlerRewards) {
      rewards.set(id, (rewards.get(id) ?? 0) + value);
    }

    const infos = this.hooks.stepInfos?.(prev, actionNames, state)
      ?? new Map(ids.map((id) => [id, {}]));
    return { rewards, terminated: false, truncated, infos };
  }

  private ruleFires(rule: RewardRule, prev: GridState, agentId: number,
                    actionName: string): boolean {
    if (actionName !== rule.action) return false;
    const agent = prev.agent(agentId);
    if (rule.holds !== undefined) {
      if (agent.inventory === null || agent.inventory.name !== rule.holds) {
        return false;
      }
    }
    const faced = forwardPos(agent.pos, agent.dir);
    if (rule.faces !== undefined && !facedKindMatches(prev, faced, rule.faces)) {
      return false;
    }
    if (rule.extraCondition !== undefined) {
      return rule.extraCondition(prev, agentId, faced);
    }
    return true;
  }
}
