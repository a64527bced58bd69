// Client-side port of the onion-soup kitchen: kinds, pot state machine,
// shaped rewards, delivery infos. Interaction branch order matches the
// server implementation exactly.
import { GridEnv } from "./engine.js";
import { forwardPos } from "./grid.js";
import { defaultRegistry, makeInstance, makeKind } from "./objects.js";
export const SCOPE = "overcooked";
export const POT_ONIONS = 0;
export const POT_TIMER = 1;
export const POT_STATUS = 2;
export const STATUS_IDLE = 0;
export const STATUS_COOKING = 1;
export const STATUS_READY = 2;
let registered = false;
export function registerOvercooked() {
    if (registered)
        return;
    registered = true;
    for (const kind of [
        makeKind({ name: "wall", scope: SCOPE, char: "#", blocksMovement: true }),
        makeKind({ name: "counter", scope: SCOPE, char: "X", color: "tan",
            blocksMovement: true }),
        makeKind({ name: "pot", scope: SCOPE, char: "P", blocksMovement: true,
            stateInit: [0, 0, 0] }),
        makeKind({ name: "onion_stack", scope: SCOPE, char: "O", color: "yellow",
            blocksMovement: true }),
        makeKind({ name: "plate_stack", scope: SCOPE, char: "D", color: "white",
            blocksMovement: true }),
        makeKind({ name: "delivery_zone", scope: SCOPE, char: "S", color: "green",
            blocksMovement: true }),
        makeKind({ name: "onion", scope: SCOPE, char: "o", color: "yellow",
            canPickup: true }),
        makeKind({ name: "plate", scope: SCOPE, char: "p", color: "white",
            canPickup: true }),
        makeKind({ name: "onion_soup", scope: SCOPE, char: "s", color: "orange",
            canPickup: true }),
    ]) {
        defaultRegistry.register(kind);
    }
}
function potHasCapacity(prev, _agentId, faced) {
    const pot = prev.staticAt(faced);
    return pot !== null && pot.kind.name === "pot"
        && pot.state[POT_STATUS] === STATUS_IDLE && pot.state[POT_ONIONS] < 3;
}
function potIsReady(prev, _agentId, faced) {
    const pot = prev.staticAt(faced);
    return pot !== null && pot.kind.name === "pot"
        && pot.state[POT_STATUS] === STATUS_READY;
}
const RULES = {
    onion_in_pot: { name: "onion_in_pot", action: "pickup_drop", value: 0.1,
        holds: "onion", faces: "pot", extraCondition: potHasCapacity },
    soup_plated: { name: "soup_plated", action: "pickup_drop", value: 0.3,
        holds: "plate", faces: "pot", extraCondition: potIsReady },
    soup_delivery: { name: "soup_delivery", action: "pickup_drop", value: 1.0,
        holds: "onion_soup", faces: "delivery_zone" },
};
class OvercookedHooks {
    cookTime;
    constructor(cookTime) {
        this.cookTime = cookTime;
    }
    pickupDrop(state, agent) {
        const faced = forwardPos(agent.pos, agent.dir);
        if (!state.inBounds(faced) || state.agentAt(faced) !== null)
            return true;
        const staticObj = state.staticAt(faced);
        const item = state.itemAt(faced);
        const staticName = staticObj?.kind.name ?? null;
        if (agent.inventory === null) {
            if (item !== null && item.kind.canPickup) {
                state.setItem(faced, null);
                agent.inventory = item.kind;
            }
            else if (staticName === "onion_stack") {
                agent.inventory = defaultRegistry.byName(SCOPE, "onion");
            }
            else if (staticName === "plate_stack") {
                agent.inventory = defaultRegistry.byName(SCOPE, "plate");
            }
            return true;
        }
        const held = agent.inventory.name;
        if (staticName === "pot") {
            const pot = staticObj;
            if (held === "onion" && pot.state[POT_STATUS] === STATUS_IDLE
                && pot.state[POT_ONIONS] < 3) {
                pot.state[POT_ONIONS] += 1;
                agent.inventory = null;
            }
            else if (held === "plate" && pot.state[POT_STATUS] === STATUS_READY) {
                agent.inventory = defaultRegistry.byName(SCOPE, "onion_soup");
                pot.state[POT_ONIONS] = 0;
                pot.state[POT_TIMER] = 0;
                pot.state[POT_STATUS] = STATUS_IDLE;
            }
        }
        else if (staticName === "delivery_zone") {
            if (held === "onion_soup")
                agent.inventory = null;
        }
        else if (staticName === "counter") {
            if (item === null) {
                state.setItem(faced, makeInstance(agent.inventory));
                agent.inventory = null;
            }
        }
        // Dropping on open floor is not part of this kitchen.
        return true;
    }
    advanceTimers(state) {
        for (const [, pot] of state.findStatic("pot")) {
            const status = pot.state[POT_STATUS];
            if (status === STATUS_IDLE && pot.state[POT_ONIONS] === 3) {
                if (this.cookTime <= 0) {
                    pot.state[POT_STATUS] = STATUS_READY;
                }
                else {
                    pot.state[POT_STATUS] = STATUS_COOKING;
                    pot.state[POT_TIMER] = this.cookTime;
                }
            }
            else if (status === STATUS_COOKING) {
                pot.state[POT_TIMER] -= 1;
                if (pot.state[POT_TIMER] <= 0) {
                    pot.state[POT_TIMER] = 0;
                    pot.state[POT_STATUS] = STATUS_READY;
                }
            }
        }
    }
    stepInfos(prev, actionNames, state) {
        const infos = new Map();
        for (const agent of prev.agents) {
            let delivered = 0;
            if (actionNames.get(agent.agentId) === "pickup_drop"
                && agent.inventory !== null
                && agent.inventory.name === "onion_soup") {
                const faced = prev.staticAt(forwardPos(agent.pos, agent.dir));
                if (faced !== null && faced.kind.name === "delivery_zone")
                    delivered = 1;
            }
            infos.set(agent.agentId, { delivered });
        }
        return infos;
    }
}
export function makeOvercookedEnv(config) {
    registerOvercooked();
    const rules = config.rewards.map((name) => {
        const rule = RULES[name];
        if (!rule)
            throw new Error(`no reward ${SCOPE}/${name}`);
        return rule;
    });
    const cookTime = config.params["cook_time"] ?? 20;
    return new GridEnv(config, rules, new OvercookedHooks(cookTime));
}
