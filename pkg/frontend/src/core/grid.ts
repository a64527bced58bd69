// Grid state, ASCII layouts, and simultaneous movement. The conflict
// rules match the engine exactly: same-target and swap proposals all
// cancel, chains cancel to a fixpoint, rotations of 3+ agents succeed.

import { CounterRng } from "./rng.js";
import {
  ObjectInstance,
  ObjectKind,
  Registry,
  defaultRegistry,
  kindBlocks,
  makeInstance,
} from "./objects.js";

export type GridPos = readonly [number, number]; // row, col

export const enum Direction {
  Right = 0,
  Down = 1,
  Left = 2,
  Up = 3,
}

export const DIR_VECTORS: ReadonlyArray<readonly [number, number]> =
  [[0, 1], [1, 0], [0, -1], [-1, 0]];

export function forwardPos(pos: GridPos, dir: Direction): GridPos {
  const [dr, dc] = DIR_VECTORS[dir];
  return [pos[0] + dr, pos[1] + dc];
}

export function samePos(a: GridPos, b: GridPos): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

export interface AgentState {
  agentId: number;
  pos: GridPos;
  dir: Direction;
  inventory: ObjectKind | null;
}

export class GridState {
  width: number;
  height: number;
  scope: string;
  staticLayer: (ObjectInstance | null)[];
  itemLayer: (ObjectInstance | null)[];
  agents: AgentState[] = [];
  tick = 0;
  rng: CounterRng;

  constructor(width: number, height: number, scope: string, rng?: CounterRng) {
    this.width = width;
    this.height = height;
    this.scope = scope;
    this.staticLayer = new Array(width * height).fill(null);
    this.itemLayer = new Array(width * height).fill(null);
    this.rng = rng ?? new CounterRng(0n);
  }

  private index(pos: GridPos): number {
    return pos[0] * this.width + pos[1];
  }

  inBounds(pos: GridPos): boolean {
    return pos[0] >= 0 && pos[0] < this.height && pos[1] >= 0 && pos[1] < this.width;
  }

  staticAt(pos: GridPos): ObjectInstance | null {
    return this.inBounds(pos) ? this.staticLayer[this.index(pos)] : null;
  }

  itemAt(pos: GridPos): ObjectInstance | null {
    return this.inBounds(pos) ? this.itemLayer[this.index(pos)] : null;
  }

  setStatic(pos: GridPos, obj: ObjectInstance | null): void {
    this.staticLayer[this.index(pos)] = obj;
  }

  setItem(pos: GridPos, obj: ObjectInstance | null): void {
    this.itemLayer[this.index(pos)] = obj;
  }

  agent(agentId: number): AgentState {
    return this.agents[agentId];
  }

  agentAt(pos: GridPos): AgentState | null {
    for (const a of this.agents) if (samePos(a.pos, pos)) return a;
    return null;
  }

  blocksMovement(pos: GridPos): boolean {
    if (!this.inBounds(pos)) return true;
    const obj = this.staticLayer[this.index(pos)];
    if (obj !== null && kindBlocks(obj.kind, obj.state)) return true;
    const item = this.itemLayer[this.index(pos)];
    return item !== null && !item.kind.canOverlap;
  }

  findStatic(kindName: string): Array<[GridPos, ObjectInstance]> {
    const out: Array<[GridPos, ObjectInstance]> = [];
    for (let r = 0; r < this.height; r++) {
      for (let c = 0; c < this.width; c++) {
        const obj = this.staticLayer[r * this.width + c];
        if (obj !== null && obj.kind.name === kindName) out.push([[r, c], obj]);
      }
    }
    return out;
  }
}

const AGENT_CHARS = "123456789";
export const DEFAULT_SPAWN_DIR = Direction.Right;

export function parseAsciiLayout(
  text: string, scope: string, seed: bigint | number = 0n,
  registry: Registry = defaultRegistry,
): GridState {
  const lines = text.split("\n").filter((_, i, arr) => true).slice();
  while (lines.length && lines[lines.length - 1].trim() === "") lines.pop();
  while (lines.length && lines[0].trim() === "") lines.shift();
  if (!lines.length) throw new Error("empty layout");
  const width = lines[0].length;
  if (lines.some((line) => line.length !== width)) {
    throw new Error("layout lines have differing lengths");
  }
  const state = new GridState(width, lines.length, scope, new CounterRng(seed));
  const spawns: Array<[number, GridPos]> = [];
  for (let r = 0; r < lines.length; r++) {
    for (let c = 0; c < width; c++) {
      const ch = lines[r][c];
      if (ch === " ") continue;
      if (AGENT_CHARS.includes(ch)) {
        spawns.push([parseInt(ch, 10) - 1, [r, c]]);
        continue;
      }
      const kind = registry.byChar(scope, ch);
      const obj = makeInstance(kind);
      if (kind.canPickup) state.setItem([r, c], obj);
      else state.setStatic([r, c], obj);
    }
  }
  spawns.sort((a, b) => a[0] - b[0]);
  for (const [agentId, pos] of spawns) {
    state.agents.push({ agentId, pos, dir: DEFAULT_SPAWN_DIR, inventory: null });
  }
  spawns.forEach(([agentId], i) => {
    if (agentId !== i) throw new Error("agent digits must be consecutive from 1");
  });
  return state;
}

export function resolveMoves(state: GridState,
                             proposals: Map<number, GridPos>): void {
  const current = new Map(state.agents.map((a) => [a.agentId, a.pos]));
  const moving = new Map<number, GridPos>();
  for (const [agentId, target] of proposals) {
    if (!samePos(target, current.get(agentId)!)) moving.set(agentId, target);
  }

  const cancelled = new Set<number>();
  for (const [agentId, target] of moving) {
    if (!state.inBounds(target) || state.blocksMovement(target)) {
      cancelled.add(agentId);
    }
  }

  const entries = [...moving.entries()];
  for (const [agentId, target] of entries) {
    for (const [otherId, otherTarget] of entries) {
      if (otherId === agentId) continue;
      if (samePos(otherTarget, target)) {
        cancelled.add(agentId);
        cancelled.add(otherId);
      }
      if (samePos(otherTarget, current.get(agentId)!)
          && samePos(target, current.get(otherId)!)) {
        cancelled.add(agentId);
        cancelled.add(otherId);
      }
    }
  }

  let changed = true;
  while (changed) {
    changed = false;
    for (const agentId of [...moving.keys()].sort((a, b) => a - b)) {
      if (cancelled.has(agentId)) continue;
      const occupant = state.agentAt(moving.get(agentId)!);
      if (occupant === null) continue;
      if (!moving.has(occupant.agentId) || cancelled.has(occupant.agentId)) {
        cancelled.add(agentId);
        changed = true;
      }
    }
  }

  for (const agentId of [...moving.keys()].sort((a, b) => a - b)) {
    if (!cancelled.has(agentId)) {
      state.agents[agentId].pos = moving.get(agentId)!;
    }
  }
}
