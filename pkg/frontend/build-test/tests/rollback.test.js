// Session state machine parity with the reference implementation.
import { test } from "node:test";
import assert from "node:assert/strict";
import { RollbackSession } from "../src/rollback.js";
const NOOP = 6;
function makeSession(maxPrediction = 8) {
    return new RollbackSession(2, 0, NOOP, maxPrediction);
}
function advanceFrames(s, n, action = 1) {
    for (let i = 0; i < n; i++) {
        s.addLocalInput(s.currentFrame, action);
        s.advance();
    }
}
test("normal advance emits save then advance", () => {
    const s = makeSession();
    s.addLocalInput(0, 2);
    const cmds = s.advance();
    assert.equal(cmds.length, 2);
    assert.deepEqual(cmds[0], { kind: "save", frame: 0 });
    assert.equal(cmds[1].kind, "advance");
    const adv = cmds[1];
    assert.deepEqual([...adv.actions.entries()], [[0, 2], [1, NOOP]]);
});
test("cold start predicts noop, then repeats last confirmed", () => {
    const s = makeSession();
    assert.equal(s.predictInput(1, 0), NOOP);
    s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [4] });
    assert.equal(s.predictInput(1, 5), 4);
});
test("mispredicted frame requests the earliest rollback", () => {
    const s = makeSession();
    advanceFrames(s, 3);
    const rollback = s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [NOOP, 5, NOOP] });
    assert.equal(rollback, 1);
});
test("depth-3 rollback: 1 load, 4 saves, 4 advances", () => {
    const s = makeSession();
    advanceFrames(s, 5);
    s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [NOOP, NOOP, 5] });
    s.addLocalInput(5, 1);
    const cmds = s.advance();
    const loads = cmds.filter((c) => c.kind === "load");
    const saves = cmds.filter((c) => c.kind === "save");
    const advances = cmds.filter((c) => c.kind === "advance");
    assert.deepEqual(loads, [{ kind: "load", frame: 2 }]);
    assert.equal(saves.length, 4);
    assert.equal(advances.length, 4);
    assert.deepEqual(advances.map((c) => c.frame), [2, 3, 4, 5]);
    // Corrected input, then predictions repeating it.
    assert.equal(advances[0].actions.get(1), 5);
    assert.equal(advances[1].actions.get(1), 5);
});
test("stalls when the speculation window is exhausted", () => {
    const s = makeSession(3);
    advanceFrames(s, 2);
    assert.ok(s.windowFull);
    assert.deepEqual(s.advance(), [{ kind: "stall" }]);
    assert.equal(s.stallCount, 1);
    s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [NOOP, NOOP] });
    assert.equal(s.confirmedFrame, 1);
    s.addLocalInput(2, 1);
    const cmds = s.advance();
    assert.equal(cmds[cmds.length - 1].kind, "advance");
});
test("matching confirmation advances without rollback", () => {
    const s = makeSession();
    advanceFrames(s, 2);
    const rollback = s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [NOOP, NOOP] });
    assert.equal(rollback, null);
    assert.equal(s.confirmedFrame, 1);
    assert.equal(s.rollbackCount, 0);
});
test("checksum exchange detects divergence both ways", () => {
    const s = makeSession();
    advanceFrames(s, 1);
    s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [NOOP] });
    s.recordLocalChecksum(0, 0xabcn);
    s.onRemoteChecksum(0, 0xabcn); // agreement
    assert.throws(() => s.onRemoteChecksum(0, 0xdefn), /desync/);
    const late = makeSession();
    advanceFrames(late, 1);
    late.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [NOOP] });
    late.onRemoteChecksum(0, 0x111n); // buffered before ours
    assert.throws(() => late.recordLocalChecksum(0, 0x222n), /desync/);
});
test("duplicate bundles are idempotent, contradictions rejected", () => {
    const s = makeSession();
    s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [2, 3] });
    s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [2, 3] });
    assert.equal(s.confirmedThrough(1), 1);
    assert.throws(() => s.onRemoteInput({ playerId: 1, firstFrame: 0, actions: [9] }), /contradictory/);
});
