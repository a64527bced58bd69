// Browser entry: joins the experiment socket, walks the scene flow, and
// hosts whichever game mode the server assigns.

import { buildRenderPayload, ClientSingleDriver, P2PDriver } from "./gameclient.js";
import { InputCapture, KeyMap } from "./input.js";
import { GridRenderer, Hud, RenderPayload } from "./renderer.js";
import { SceneMachine, SceneMessage } from "./scenes.js";

type View = "start" | "waiting" | "game" | "survey" | "end" | "error";

const views: Record<View, HTMLElement> = {} as Record<View, HTMLElement>;

function show(view: View): void {
  for (const [name, el] of Object.entries(views)) {
    el.classList.toggle("active", name === view);
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  for (const name of ["start", "waiting", "game", "survey", "end", "error"] as View[]) {
    views[name] = el(`view-${name}`);
  }
  const canvas = el<HTMLCanvasElement>("game-canvas");
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  const ws = new WebSocket(`${scheme}://${location.host}/ws`);
  const send = (message: Record<string, unknown>) =>
    ws.send(JSON.stringify(message));

  const scenes = new SceneMachine();
  let capture: InputCapture | null = null;
  let renderer: GridRenderer | null = null;
  let driver: ClientSingleDriver | P2PDriver | null = null;
  let tickTimer: number | null = null;
  let gymScene: SceneMessage | null = null;

  const stopGame = () => {
    if (tickTimer !== null) { clearInterval(tickTimer); tickTimer = null; }
    capture?.detach();
    capture = null;
    driver = null;
    scenes.endGame();
  };

  const setupRenderer = (width: number, height: number) => {
    const cell = Math.floor(Math.min(640 / width, 480 / height));
    canvas.width = width * cell;
    canvas.height = height * cell;
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    renderer = new GridRenderer(ctx, cell, el("hud-score"), el("hud-time"));
  };

  const setupInput = (keyMap: KeyMap, noop: number) => {
    capture = new InputCapture(keyMap, noop);
    capture.attach(document, window);
    capture.onFocusChange = (blurred) =>
      send({ type: "focus", blurred, tick: driver ? driver.state.tick : 0 });
    return capture;
  };

  const startClientSide = (assign: Record<string, unknown>) => {
    scenes.beginGame();
    show("game");
    const fps = Number(assign["fps"] ?? 10);
    const onFrame = ({ state, score }: { state: any; score: number }) => {
      if (!renderer) setupRenderer(state.width, state.height);
      const payload = buildRenderPayload(state);
      const timeLeft = ((driver as any).config.maxTicks - state.tick) / fps;
      renderer!.renderFrame(payload, {
        score: Math.round(score * 100) / 100,
        time_left: Math.round(timeLeft * 10) / 10,
      });
    };
    const source = capture ?? setupInput(
      (gymScene?.["key_map"] ?? {}) as KeyMap, 6);
    if (assign["mode"] === "client_p2p") {
      driver = new P2PDriver(assign as any, send, source, onFrame);
    } else {
      driver = new ClientSingleDriver(assign as any, send, source, onFrame);
    }
    tickTimer = setInterval(() => {
      try {
        if (driver && driver.tick()) {
          stopGame();
          if ((driver as any)?.desynced) show("error");
        }
      } catch (err) {
        console.error(err);
        stopGame();
        show("error");
      }
    }, 1000 / fps) as unknown as number;
  };

  const renderServerState = (message: Record<string, unknown>) => {
    const payload = message["render"] as RenderPayload;
    const hud = message["hud"] as Hud;
    if (!renderer) setupRenderer(payload.width, payload.height);
    renderer!.renderFrame(payload, hud);
  };

  ws.onmessage = (event) => {
    const message = JSON.parse(event.data as string);
    switch (message.type) {
      case "ping":
        send({ type: "pong", nonce: message.nonce });
        break;
      case "scene":
        handleScene(message as SceneMessage);
        break;
      case "match":
        if (message.status === "waiting") show("waiting");
        break;
      case "state":
        if (!scenes.gameActive && scenes.current?.kind === "gym") {
          scenes.beginGame();
          show("game");
          const keyMap = (gymScene?.["key_map"] ?? {}) as KeyMap;
          const input = capture ?? setupInput(keyMap, 6);
          input.onAction = (action) => send({ type: "input", action });
        }
        renderServerState(message);
        break;
      case "assign":
        startClientSide(message);
        break;
      case "peer_bundle":
      case "session_flagged":
        (driver as P2PDriver | null)?.receive(message);
        if (message.type === "session_flagged") {
          stopGame();
          show("error");
        }
        break;
      case "code":
        el("completion-code").textContent = message.code;
        show("end");
        break;
      case "error":
        el("error-detail").textContent = message.detail ?? message.code;
        show("error");
        break;
    }
  };

  function handleScene(message: SceneMessage): void {
    if (scenes.gameActive) stopGame();
    try {
      scenes.accept(message);
    } catch (err) {
      console.warn("rejected out-of-order scene", err);
      return;
    }
    switch (message.kind) {
      case "start":
        el("start-page").textContent = String(message["page"] ?? "");
        show("start");
        break;
      case "gym":
        gymScene = message;
        show("waiting");
        break;
      case "survey": {
        const form = el("survey-questions");
        form.innerHTML = "";
        for (const q of (message["questions"] as string[]) ?? []) {
          const label = document.createElement("label");
          label.textContent = q;
          const box = document.createElement("textarea");
          box.dataset.question = q;
          label.appendChild(box);
          form.appendChild(label);
        }
        show("survey");
        break;
      }
      case "end":
        show("end");
        break;
    }
  }

  el("start-button").addEventListener("click", () =>
    send({ type: "scene_event", event: "start" }));

  el("survey-submit").addEventListener("click", () => {
    const answers: Record<string, string> = {};
    views.survey.querySelectorAll("textarea").forEach((box) => {
      answers[box.dataset.question ?? ""] = box.value;
    });
    send({ type: "survey_submit", answers });
  });

  ws.onopen = () => {
    const participant = new URLSearchParams(location.search).get("p");
    send({ type: "join", ...(participant ? { participant_id: participant } : {}) });
  };
  ws.onclose = () => {
    if (!views.end.classList.contains("active")) show("error");
  };
}

main();
