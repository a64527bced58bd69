// Client scene machine: exactly one active view, server-driven
// transitions only, out-of-order messages rejected.
import { test } from "node:test";
import assert from "node:assert/strict";
import { SceneMachine } from "../src/scenes.js";
test("normal flow start to end", () => {
    const m = new SceneMachine();
    const seen = [];
    m.onChange = (scene) => seen.push(scene.scene_id);
    m.accept({ scene_id: "welcome", kind: "start" });
    m.accept({ scene_id: "game", kind: "gym" });
    m.beginGame();
    m.endGame();
    m.accept({ scene_id: "post", kind: "survey" });
    m.accept({ scene_id: "done", kind: "end" });
    assert.deepEqual(seen, ["welcome", "game", "post", "done"]);
});
test("repeated scene id rejected", () => {
    const m = new SceneMachine();
    m.accept({ scene_id: "welcome", kind: "start" });
    assert.throws(() => m.accept({ scene_id: "welcome", kind: "start" }), /already shown/);
});
test("scene during an active game rejected", () => {
    const m = new SceneMachine();
    m.accept({ scene_id: "game", kind: "gym" });
    m.beginGame();
    assert.throws(() => m.accept({ scene_id: "post", kind: "survey" }), /mid-game/);
});
test("nothing after the completion page", () => {
    const m = new SceneMachine();
    m.accept({ scene_id: "done", kind: "end" });
    assert.throws(() => m.accept({ scene_id: "extra", kind: "survey" }), /after the completion page/);
});
test("beginGame requires a gym scene", () => {
    const m = new SceneMachine();
    m.accept({ scene_id: "welcome", kind: "start" });
    assert.throws(() => m.beginGame(), /no gym scene/);
});
