// Canonical state bytes and the FNV-1a 64 checksum. The byte layout is
// the shared contract (docs/state-format.md); this file and the server
// must serialize identically or desync detection fires on honest peers.

import { GridState, Direction, GridPos } from "./grid.js";
import { ObjectInstance, Registry, defaultRegistry, makeInstance } from "./objects.js";
import { CounterRng } from "./rng.js";

const MASK64 = (1n << 64n) - 1n;
const FNV_OFFSET = 0xcbf29ce484222325n;
const FNV_PRIME = 0x100000001b3n;

export function fnv1a64(payload: Uint8Array): bigint {
  let h = FNV_OFFSET;
  for (const b of payload) {
    h = ((h ^ BigInt(b)) * FNV_PRIME) & MASK64;
  }
  return h;
}

export function checksumHex(value: bigint): string {
  return value.toString(16).padStart(16, "0");
}

class ByteWriter {
  private chunks: number[] = [];

  u8(v: number): void { this.chunks.push(v & 0xff); }

  u16(v: number): void {
    this.chunks.push(v & 0xff, (v >> 8) & 0xff);
  }

  i32(v: number): void {
    const buf = new DataView(new ArrayBuffer(4));
    buf.setInt32(0, v, true);
    for (let i = 0; i < 4; i++) this.chunks.push(buf.getUint8(i));
  }

  u64(v: bigint): void {
    let x = v & MASK64;
    for (let i = 0; i < 8; i++) {
      this.chunks.push(Number(x & 0xffn));
      x >>= 8n;
    }
  }

  bytes(data: Uint8Array): void {
    for (const b of data) this.chunks.push(b);
  }

  finish(): Uint8Array {
    return Uint8Array.from(this.chunks);
  }
}

function packLayer(out: ByteWriter, layer: (ObjectInstance | null)[]): void {
  for (const obj of layer) {
    if (obj === null) {
      out.u8(0);
    } else {
      out.u8(obj.kind.char.charCodeAt(0));
      out.u8(obj.state.length);
      for (const v of obj.state) out.i32(v);
    }
  }
}

export function canonicalBytes(state: GridState): Uint8Array {
  const out = new ByteWriter();
  out.u8(1); // format version
  const scope = new TextEncoder().encode(state.scope);
  out.u16(scope.length);
  out.bytes(scope);
  out.u16(state.width);
  out.u16(state.height);
  out.u64(BigInt(state.tick));
  out.u64(state.rng.seed);
  out.u64(state.rng.counter);
  packLayer(out, state.staticLayer);
  packLayer(out, state.itemLayer);
  out.u8(state.agents.length);
  for (const agent of state.agents) {
    out.u8(agent.agentId);
    out.u16(agent.pos[0]);
    out.u16(agent.pos[1]);
    out.u8(agent.dir);
    out.u8(agent.inventory ? agent.inventory.char.charCodeAt(0) : 0);
  }
  return out.finish();
}

export function stateChecksum(state: GridState): bigint {
  return fnv1a64(canonicalBytes(state));
}

export interface Snapshot {
  frame: number;
  payload: Uint8Array;
  checksum: bigint;
}

export function snapshot(state: GridState): Snapshot {
  const payload = canonicalBytes(state);
  return { frame: state.tick, payload, checksum: fnv1a64(payload) };
}

class ByteReader {
  private at = 0;
  constructor(private buf: Uint8Array) {}

  private take(n: number): Uint8Array {
    if (this.at + n > this.buf.length) throw new Error("payload truncated");
    const chunk = this.buf.subarray(this.at, this.at + n);
    this.at += n;
    return chunk;
  }

  u8(): number { return this.take(1)[0]; }

  u16(): number {
    const c = this.take(2);
    return c[0] | (c[1] << 8);
  }

  i32(): number {
    const c = this.take(4);
    return new DataView(c.slice().buffer).getInt32(0, true);
  }

  u64(): bigint {
    const c = this.take(8);
    let x = 0n;
    for (let i = 7; i >= 0; i--) x = (x << 8n) | BigInt(c[i]);
    return x;
  }

  text(n: number): string {
    return new TextDecoder().decode(this.take(n));
  }

  get done(): boolean { return this.at === this.buf.length; }
}

function unpackLayer(reader: ByteReader, state: GridState, registry: Registry,
                     itemLayer: boolean): void {
  for (let r = 0; r < state.height; r++) {
    for (let c = 0; c < state.width; c++) {
      const code = reader.u8();
      if (code === 0) continue;
      const kind = registry.byChar(state.scope, String.fromCharCode(code));
      const n = reader.u8();
      const values: number[] = [];
      for (let i = 0; i < n; i++) values.push(reader.i32());
      const pos: GridPos = [r, c];
      const obj = makeInstance(kind, values);
      if (itemLayer) state.setItem(pos, obj);
      else state.setStatic(pos, obj);
    }
  }
}

export function restore(snap: Snapshot,
                        registry: Registry = defaultRegistry): GridState {
  if (fnv1a64(snap.payload) !== snap.checksum) {
    throw new Error("checksum mismatch");
  }
  const reader = new ByteReader(snap.payload);
  const version = reader.u8();
  if (version !== 1) throw new Error(`unsupported format version ${version}`);
  const scope = reader.text(reader.u16());
  const width = reader.u16();
  const height = reader.u16();
  const tick = reader.u64();
  const seed = reader.u64();
  const counter = reader.u64();
  const state = new GridState(width, height, scope, new CounterRng(seed, counter));
  state.tick = Number(tick);
  unpackLayer(reader, state, registry, false);
  unpackLayer(reader, state, registry, true);
  const numAgents = reader.u8();
  for (let i = 0; i < numAgents; i++) {
    const agentId = reader.u8();
    const row = reader.u16();
    const col = reader.u16();
    const dir = reader.u8() as Direction;
    const inv = reader.u8();
    state.agents.push({
      agentId,
      pos: [row, col],
      dir,
      inventory: inv ? registry.byChar(scope, String.fromCharCode(inv)) : null,
    });
  }
  if (!reader.done) throw new Error("trailing bytes in payload");
  return state;
}
