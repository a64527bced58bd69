// Client-side port of the search and rescue task. Rescue rewards come
// from the toggle handler (same ordering as the server: individual
// toggles ascending by agent id, then the dual-rescuer pass for red
// victims in row-major victim order).

import { EnvConfig } from "./config.js";
import { GridEnv, Hooks } from "./engine.js";
import { AgentState, GridPos, GridState, forwardPos } from "./grid.js";
import { defaultRegistry, makeKind } from "./objects.js";

export const SCOPE = "search_rescue";
export const RESCUE_REWARD = 1.0;

const VICTIM_KINDS = ["victim_green", "victim_yellow", "victim_red"];

let registered = false;

export function registerSearchRescue(): void {
  if (registered) return;
  registered = true;
  for (const kind of [
    makeKind({ name: "wall", scope: SCOPE, char: "#", blocksMovement: true }),
    makeKind({ name: "victim_green", scope: SCOPE, char: "g", color: "green",
               canToggle: true, blocksMovement: true }),
    makeKind({ name: "victim_yellow", scope: SCOPE, char: "y", color: "yellow",
               canToggle: true, blocksMovement: true }),
    makeKind({ name: "victim_red", scope: SCOPE, char: "r", color: "red",
               canToggle: true, blocksMovement: true }),
    makeKind({ name: "rubble", scope: SCOPE, char: "x", color: "brown",
               canToggle: true, blocksMovement: true }),
    makeKind({ name: "door", scope: SCOPE, char: "d", color: "blue",
               canToggle: true, blocksMovement: true, stateInit: [0],
               blocksWhen: (st) => st[0] === 0 }),
    makeKind({ name: "pickaxe", scope: SCOPE, char: "t", canPickup: true }),
    makeKind({ name: "key", scope: SCOPE, char: "k", color: "gold",
               canPickup: true }),
    makeKind({ name: "med_kit", scope: SCOPE, char: "m", color: "red",
               canPickup: true }),
  ]) {
    defaultRegistry.register(kind);
  }
}

class SearchRescueHooks implements Hooks {
  toggles(state: GridState, togglers: AgentState[]): Map<number, number> {
    const rewards = new Map<number, number>();
    const redTogglers = new Map<string, { pos: GridPos; agents: number[] }>();
    const add = (agentId: number) =>
      rewards.set(agentId, (rewards.get(agentId) ?? 0) + RESCUE_REWARD);

    for (const agent of [...togglers].sort((a, b) => a.agentId - b.agentId)) {
      const faced = forwardPos(agent.pos, agent.dir);
      const target = state.staticAt(faced);
      if (target === null) continue;
      const name = target.kind.name;
      const holding = agent.inventory?.name ?? null;
      if (name === "rubble" && holding === "pickaxe") {
        state.setStatic(faced, null);
      } else if (name === "door" && holding === "key") {
        target.state[0] = 1;
      } else if (name === "victim_green") {
        state.setStatic(faced, null);
        add(agent.agentId);
      } else if (name === "victim_yellow" && holding === "med_kit") {
        state.setStatic(faced, null);
        add(agent.agentId);
      } else if (name === "victim_red") {
        const key = `${faced[0]},${faced[1]}`;
        const entry = redTogglers.get(key) ?? { pos: faced, agents: [] };
        entry.agents.push(agent.agentId);
        redTogglers.set(key, entry);
      }
    }

    const cells = [...redTogglers.values()].sort(
      (a, b) => a.pos[0] - b.pos[0] || a.pos[1] - b.pos[1]);
    for (const { pos, agents } of cells) {
      const rescuers = [...new Set(agents)].sort((a, b) => a - b);
      if (rescuers.length >= 2) {
        state.setStatic(pos, null);
        for (const agentId of rescuers) add(agentId);
      }
    }
    return rewards;
  }

  stepInfos(prev: GridState, _actionNames: Map<number, string>,
            state: GridState): Map<number, Record<string, number>> {
    const count = (s: GridState) => VICTIM_KINDS.reduce(
      (acc, kind) => acc + s.findStatic(kind).length, 0);
    const remaining = count(state);
    const before = count(prev);
    const infos = new Map<number, Record<string, number>>();
    for (const agent of state.agents) {
      infos.set(agent.agentId, {
        victims_remaining: remaining,
        rescued_this_tick: before - remaining,
      });
    }
    return infos;
  }
}

export function makeSearchRescueEnv(config: EnvConfig): GridEnv {
  registerSearchRescue();
  return new GridEnv(config, [], new SearchRescueHooks());
}
