// Renderer audit with a recording draw context (jsdom ships no real
// canvas backend): sprite census, agent rotation, HUD text.

import { test } from "node:test";
import assert from "node:assert/strict";

import { buildRenderPayload } from "../src/gameclient.js";
import { makeEnvFromText } from "../src/core/index.js";
import { Draw2D, GridRenderer } from "../src/renderer.js";

const CONFIG_TEXT = `
name = cramped_room
scope = overcooked
action_set = cardinal
max_ticks = 50
seed = 3
layout =
    XXPXX
    O 1 X
    X 2 X
    XDXSX
`;

class RecordingCtx implements Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 1;
  font = "";
  textAlign: CanvasTextAlign = "left";
  calls: Array<[string, ...unknown[]]> = [];
  rotations: number[] = [];

  private log(name: string, ...args: unknown[]): void {
    this.calls.push([name, ...args]);
  }
  clearRect(...a: number[]): void { this.log("clearRect", ...a); }
  fillRect(...a: number[]): void { this.log("fillRect", ...a); }
  strokeRect(...a: number[]): void { this.log("strokeRect", ...a); }
  beginPath(): void { this.log("beginPath"); }
  arc(...a: number[]): void { this.log("arc", ...a); }
  moveTo(...a: number[]): void { this.log("moveTo", ...a); }
  lineTo(...a: number[]): void { this.log("lineTo", ...a); }
  closePath(): void { this.log("closePath"); }
  fill(): void { this.log("fill"); }
  stroke(): void { this.log("stroke"); }
  fillText(text: string, x: number, y: number): void { this.log("fillText", text, x, y); }
  save(): void { this.log("save"); }
  restore(): void { this.log("restore"); }
  translate(...a: number[]): void { this.log("translate", ...a); }
  rotate(angle: number): void { this.rotations.push(angle); this.log("rotate", angle); }
}

test("sprite census equals object census", () => {
  const env = makeEnvFromText(CONFIG_TEXT);
  const state = env.reset();
  const payload = buildRenderPayload(state);

  // 10 counters + pot + onion stack + plate stack + delivery + 2 agents.
  assert.equal(payload.sprites.length, 16);
  const byKind = new Map<string, number>();
  for (const sprite of payload.sprites) {
    byKind.set(sprite.sprite_id, (byKind.get(sprite.sprite_id) ?? 0) + 1);
  }
  assert.equal(byKind.get("counter"), 10);
  assert.equal(byKind.get("pot"), 1);
  assert.equal(byKind.get("onion_stack"), 1);
  assert.equal(byKind.get("plate_stack"), 1);
  assert.equal(byKind.get("delivery_zone"), 1);
  assert.equal(byKind.get("agent"), 2);

  const ctx = new RecordingCtx();
  const renderer = new GridRenderer(ctx, 32);
  renderer.renderFrame(payload, { score: 0, time_left: 5 });
  assert.equal(renderer.spritesDrawn, payload.sprites.length);
  assert.ok(ctx.calls.some(([name]) => name === "fillRect"));
});

test("agent orientation rotates by quarter turns", () => {
  const env = makeEnvFromText(CONFIG_TEXT);
  const state = env.reset();
  // Face agent 0 upward via a blocked cardinal move.
  env.step(state, new Map([[0, 0], [1, 6]]));
  const payload = buildRenderPayload(state);
  const agent0 = payload.sprites.find(
    (s) => s.sprite_id === "agent" && s.variant === 0)!;
  assert.equal(agent0.orientation, 3); // Direction.Up
  const ctx = new RecordingCtx();
  new GridRenderer(ctx, 32).renderFrame(payload, null);
  assert.ok(ctx.rotations.includes((Math.PI / 2) * 3));
});

test("unknown sprite draws a placeholder and warns once", () => {
  const ctx = new RecordingCtx();
  const renderer = new GridRenderer(ctx, 32);
  const warnings: unknown[] = [];
  const original = console.warn;
  console.warn = (...args: unknown[]) => warnings.push(args);
  try {
    renderer.renderFrame({
      width: 2, height: 1,
      sprites: [
        { pos: [0, 0], sprite_id: "mystery", orientation: 0 },
        { pos: [0, 1], sprite_id: "mystery", orientation: 0 },
      ],
    }, null);
  } finally {
    console.warn = original;
  }
  assert.equal(renderer.spritesDrawn, 2);
  assert.equal(warnings.length, 1);
});

test("hud shows score and time from state messages", () => {
  const score = { textContent: null as string | null };
  const time = { textContent: null as string | null };
  const renderer = new GridRenderer(new RecordingCtx(), 32, score, time);
  renderer.renderFrame({ width: 1, height: 1, sprites: [] },
                       { score: 2.4, time_left: 31.5 });
  assert.equal(score.textContent, "Score 2.4");
  assert.equal(time.textContent, "Time 31.5s");
  assert.deepEqual(renderer.lastHud, { score: 2.4, time_left: 31.5 });
});

test("empty payload draws a blank grid", () => {
  const ctx = new RecordingCtx();
  const renderer = new GridRenderer(ctx, 32);
  renderer.renderFrame({ width: 3, height: 2, sprites: [] }, null);
  assert.equal(renderer.spritesDrawn, 0);
  const gridLines = ctx.calls.filter(([name]) => name === "strokeRect");
  assert.equal(gridLines.length, 6);
});
