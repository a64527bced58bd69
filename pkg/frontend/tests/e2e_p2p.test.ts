// Full loopback e2e: the real experiment server process, two real
// websocket clients running the client-side simulation with rollback,
// three episodes, zero desyncs, and a server-side replay-verified log.

import { after, before, test } from "node:test";
import assert from "node:assert/strict";
import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync, readdirSync } from "node:fs";
import { tmpdir } from "node:os";
import { fileURLToPath } from "node:url";
import { join, dirname } from "node:path";
import WebSocket from "ws";

import { P2PDriver } from "../src/gameclient.js";
import { buildRenderPayload } from "../src/gameclient.js";
import { GridRenderer, Hud } from "../src/renderer.js";

const here = dirname(fileURLToPath(import.meta.url));
// Compiled test lives in build-test/tests; fixtures stay in tests/.
const fixtures = join(here, "..", "..", "tests", "fixtures");
const repoRoot = join(here, "..", "..", "..");

const PORT = 18700 + Math.floor(Math.random() * 1000);
const LOG_DIR = mkdtempSync(join(tmpdir(), "gridplay-e2e-"));

let server: ChildProcess;

before(async () => {
  server = spawn("python3", [
    "-m", "gridplay.server.app",
    "--config", join(fixtures, "e2e_p2p.json"),
    "--port", String(PORT), "--host", "127.0.0.1",
    "--log-dir", LOG_DIR, "--headless-bots",
  ], { cwd: repoRoot, stdio: ["ignore", "pipe", "pipe"] });
  let log = "";
  server.stdout?.on("data", (d) => { log += d; });
  server.stderr?.on("data", (d) => { log += d; });
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`http://127.0.0.1:${PORT}/healthz`);
      if (resp.ok) return;
    } catch { /* not up yet */ }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error(`server never became healthy:\n${log}`);
});

after(() => {
  server?.kill("SIGINT");
});

interface ClientResult {
  code: string;
  desynced: boolean;
  rollbacks: number;
  score: number;
  hud: Hud | null;
  spritesDrawn: number;
  framesRendered: number;
}

class ScriptedSource {
  private k = 0;
  constructor(private salt: number) {}
  takeAction(): number {
    this.k += 1;
    return (this.k * 7 + this.salt * 13) % 7;
  }
}

class HudSink {
  textContent: string | null = null;
}

function nullCtx(): any {
  const noop = () => undefined;
  return new Proxy({}, { get: (_t, prop) =>
    prop === "fillStyle" || prop === "strokeStyle" ? "" : noop });
}

async function runParticipant(name: string, salt: number): Promise<ClientResult> {
  const ws = new WebSocket(`ws://127.0.0.1:${PORT}/ws`);
  const send = (message: Record<string, unknown>) =>
    ws.send(JSON.stringify(message));
  await new Promise<void>((resolve, reject) => {
    ws.on("open", () => resolve());
    ws.on("error", reject);
  });
  send({ type: "join", participant_id: name });

  const scoreSink = new HudSink();
  const timeSink = new HudSink();
  const renderer = new GridRenderer(nullCtx(), 32, scoreSink, timeSink);
  let framesRendered = 0;
  let driver: P2PDriver | null = null;
  let ticker: ReturnType<typeof setInterval> | null = null;
  let rollbacks = 0;

  const result = await new Promise<ClientResult>((resolve, reject) => {
    const fail = (err: unknown) => {
      if (ticker) clearInterval(ticker);
      reject(err instanceof Error ? err : new Error(String(err)));
    };
    ws.on("message", (data) => {
      const message = JSON.parse(data.toString());
      try {
        switch (message.type) {
          case "ping":
            send({ type: "pong", nonce: message.nonce });
            break;
          case "scene":
            if (message.kind === "start") {
              send({ type: "scene_event", event: "start" });
            } else if (message.kind === "survey") {
              send({ type: "survey_submit", answers: { "smooth?": "yes" } });
            }
            break;
          case "assign": {
            driver = new P2PDriver(message, send, new ScriptedSource(salt),
              ({ state, score }) => {
                framesRendered += 1;
                renderer.renderFrame(buildRenderPayload(state), {
                  score: Math.round(score * 100) / 100,
                  time_left: (driver!.config.maxTicks - state.tick) / 30,
                });
              });
            ticker = setInterval(() => {
              try {
                if (driver && !driver.done) {
                  driver.tick();
                  rollbacks = driver.session.rollbackCount > rollbacks
                    ? driver.session.rollbackCount : rollbacks;
                } else if (ticker) {
                  clearInterval(ticker);
                  ticker = null;
                }
              } catch (err) {
                fail(err);
              }
            }, 1);
            break;
          }
          case "peer_bundle":
          case "session_flagged":
            driver?.receive(message);
            if (message.type === "session_flagged") {
              fail(new Error(`session flagged: ${message.reason}`));
            }
            break;
          case "code":
            if (ticker) clearInterval(ticker);
            resolve({
              code: message.code,
              desynced: driver?.desynced ?? false,
              rollbacks,
              score: driver?.score ?? 0,
              hud: renderer.lastHud,
              spritesDrawn: renderer.spritesDrawn,
              framesRendered,
            });
            break;
          case "error":
            fail(new Error(`server error: ${JSON.stringify(message)}`));
            break;
        }
      } catch (err) {
        fail(err);
      }
    });
    ws.on("error", fail);
  });
  ws.close();
  return result;
}

test("loopback p2p pair: 3 episodes, zero desyncs, replay-verified uploads",
     { timeout: 120_000 }, async () => {
  const [alice, bob] = await Promise.all([
    runParticipant("alice", 1),
    runParticipant("bob", 2),
  ]);

  assert.equal(alice.desynced, false);
  assert.equal(bob.desynced, false);
  assert.equal(alice.code.length, 12);
  assert.equal(bob.code.length, 12);
  assert.notEqual(alice.code, bob.code);
  // Both clients actually simulated and rendered.
  assert.ok(alice.framesRendered >= 60, `rendered ${alice.framesRendered}`);
  assert.ok(alice.hud !== null && bob.hud !== null);
  assert.ok(alice.spritesDrawn >= 16);
  // Identical local simulations: both ended on the same score.
  assert.equal(alice.score, bob.score);

  // The server accepted the uploads only after replay-verifying them,
  // and the written log must satisfy the offline replay tool too.
  const logs = readdirSync(LOG_DIR).filter((f) => f.endsWith(".traj"));
  assert.equal(logs.length, 1, `expected one session log, got ${logs}`);
  const replay = spawnSync("python3",
    ["-m", "gridplay.cli", "replay", "--file", join(LOG_DIR, logs[0])],
    { cwd: repoRoot, encoding: "utf-8" });
  assert.equal(replay.status, 0, replay.stdout + replay.stderr);
  assert.match(replay.stdout, /ok: session/);
  assert.match(replay.stdout, /3 episode/);
  assert.match(replay.stdout, /60 ticks verified/);
});
