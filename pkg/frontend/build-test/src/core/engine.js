// Step pipeline with the fixed phase order shared with the server:
// validate, rotations/facing, simultaneous movement, pickup/drop,
// toggles, timers, tick, rewards, infos. Observation features are a
// training concern and are not computed client side.
import { GridState, forwardPos, parseAsciiLayout, resolveMoves, } from "./grid.js";
import { defaultRegistry, makeInstance } from "./objects.js";
import { episodeSeed } from "./rng.js";
export const ROTATIONAL_ACTIONS = ["turn_left", "turn_right", "move_forward", "pickup_drop", "toggle", "noop"];
export const CARDINAL_ACTIONS = ["move_up", "move_down", "move_left", "move_right", "pickup_drop", "toggle", "noop"];
const CARDINAL_DIRS = {
    move_up: 3 /* Direction.Up */,
    move_down: 1 /* Direction.Down */,
    move_left: 2 /* Direction.Left */,
    move_right: 0 /* Direction.Right */,
};
export function defaultPickupDrop(state, agent) {
    const faced = forwardPos(agent.pos, agent.dir);
    if (!state.inBounds(faced) || state.agentAt(faced) !== null)
        return;
    if (agent.inventory === null) {
        const item = state.itemAt(faced);
        if (item !== null && item.kind.canPickup) {
            state.setItem(faced, null);
            agent.inventory = item.kind;
        }
    }
    else if (state.itemAt(faced) === null && state.staticAt(faced) === null) {
        state.setItem(faced, makeInstance(agent.inventory));
        agent.inventory = null;
    }
}
function facedKindMatches(prev, pos, kindName) {
    const staticObj = prev.staticAt(pos);
    if (staticObj !== null && staticObj.kind.name === kindName)
        return true;
    const item = prev.itemAt(pos);
    return item !== null && item.kind.name === kindName;
}
function cloneState(state) {
    const out = new GridState(state.width, state.height, state.scope, state.rng.clone());
    const cloneObj = (o) => o === null ? null : { kind: o.kind, state: [...o.state] };
    out.staticLayer = state.staticLayer.map(cloneObj);
    out.itemLayer = state.itemLayer.map(cloneObj);
    out.agents = state.agents.map((a) => ({ ...a }));
    out.tick = state.tick;
    return out;
}
export class GridEnv {
    config;
    rules;
    hooks;
    registry;
    actions;
    noop;
    constructor(config, rules, hooks, registry = defaultRegistry) {
        this.config = config;
        this.rules = rules;
        this.hooks = hooks;
        this.registry = registry;
        this.actions = config.actionMode === "rotational"
            ? ROTATIONAL_ACTIONS : CARDINAL_ACTIONS;
        this.noop = this.actions.indexOf("noop");
    }
    reset(seed) {
        return parseAsciiLayout(this.config.layout, this.config.scope, seed ?? BigInt(this.config.seed), this.registry);
    }
    resetEpisode(baseSeed, episode) {
        return this.reset(episodeSeed(baseSeed, episode));
    }
    step(state, actions) {
        const ids = state.agents.map((a) => a.agentId);
        const actionNames = new Map();
        for (const id of ids) {
            const action = actions.get(id);
            if (action === undefined)
                throw new Error(`no action for agent ${id}`);
            if (action < 0 || action >= this.actions.length) {
                throw new Error(`action id ${action} out of range`);
            }
            actionNames.set(id, this.actions[action]);
        }
        const prev = cloneState(state);
        // Phase 2: rotations / facing.
        for (const id of ids) {
            const agent = state.agent(id);
            const name = actionNames.get(id);
            if (this.config.actionMode === "rotational") {
                if (name === "turn_left")
                    agent.dir = ((agent.dir + 3) % 4);
                else if (name === "turn_right")
                    agent.dir = ((agent.dir + 1) % 4);
            }
            else if (name in CARDINAL_DIRS) {
                agent.dir = CARDINAL_DIRS[name];
            }
        }
        // Phase 3: simultaneous movement.
        const proposals = new Map();
        for (const id of ids) {
            const name = actionNames.get(id);
            const moving = this.config.actionMode === "rotational"
                ? name === "move_forward" : name in CARDINAL_DIRS;
            if (moving) {
                const agent = state.agent(id);
                proposals.set(id, forwardPos(agent.pos, agent.dir));
            }
        }
        if (proposals.size)
            resolveMoves(state, proposals);
        // Phase 4: pickup/drop ascending.
        for (const id of ids) {
            if (actionNames.get(id) === "pickup_drop") {
                const agent = state.agent(id);
                const handled = this.hooks.pickupDrop?.(state, agent) ?? false;
                if (!handled)
                    defaultPickupDrop(state, agent);
            }
        }
        // Phase 5: toggles, collected per tick.
        const togglers = ids.filter((id) => actionNames.get(id) === "toggle")
            .map((id) => state.agent(id));
        const handlerRewards = togglers.length
            ? (this.hooks.toggles?.(state, togglers) ?? new Map())
            : new Map();
        // Phase 6: timers.
        this.hooks.advanceTimers?.(state);
        state.tick += 1;
        const truncated = state.tick >= this.config.maxTicks;
        // Phase 7: rewards.
        const rewards = new Map(ids.map((id) => [id, 0]));
        for (const id of ids) {
            const actionName = actionNames.get(id);
            for (const rule of this.rules) {
                if (this.ruleFires(rule, prev, id, actionName)) {
                    rewards.set(id, rewards.get(id) + rule.value);
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
    ruleFires(rule, prev, agentId, actionName) {
        if (actionName !== rule.action)
            return false;
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
