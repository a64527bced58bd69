// Cross-implementation parity: every value in the golden fixture was
// produced by the server engine; the client core must match bit for bit.
import { test } from "node:test";
import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { CounterRng, canonicalBytes, checksumHex, episodeSeed, fnv1a64, makeEnvFromText, mix64, stateChecksum, } from "../src/core/index.js";
const golden = JSON.parse(readFileSync(new URL("../../tests/fixtures/golden.json", import.meta.url), "utf-8"));
function hexBytes(bytes) {
    return [...bytes].map((b) => b.toString(16).padStart(2, "0")).join("");
}
test("mix64 vectors", () => {
    for (const { in: input, out } of golden.mix64) {
        assert.equal(checksumHex(mix64(BigInt(input))), out);
    }
});
test("fnv1a64 vectors", () => {
    const encoder = new TextEncoder();
    for (const { in: input, out } of golden.fnv1a64) {
        assert.equal(checksumHex(fnv1a64(encoder.encode(input))), out);
    }
});
test("episode seed derivation", () => {
    for (const { base, episode, out } of golden.episode_seed) {
        assert.equal(checksumHex(episodeSeed(BigInt(base), episode)), out);
    }
});
test("rng draw sequences", () => {
    for (const { seed, counter, next } of golden.rng) {
        const rng = new CounterRng(BigInt(seed), BigInt(counter));
        for (const expected of next) {
            assert.equal(checksumHex(rng.nextU64()), expected);
        }
    }
});
for (const envName of ["overcooked", "search_rescue"]) {
    const block = golden[envName];
    test(`${envName}: initial state serializes identically`, () => {
        const env = makeEnvFromText(block.config_text);
        const state = env.reset();
        assert.equal(hexBytes(canonicalBytes(state)), block.initial_payload_hex);
        assert.equal(checksumHex(stateChecksum(state)), block.initial_checksum);
    });
    for (let runIdx = 0; runIdx < block.runs.length; runIdx++) {
        test(`${envName}: run ${runIdx} replays to identical checksums and rewards`, () => {
            const run = block.runs[runIdx];
            const env = makeEnvFromText(block.config_text);
            const state = env.reset(BigInt(run.seed));
            let delivered = 0;
            for (let t = 0; t < run.actions.length; t++) {
                const actions = new Map(run.actions[t].map((a, agent) => [agent, a]));
                const result = env.step(state, actions);
                assert.equal(checksumHex(stateChecksum(state)), run.checksums[t], `${envName} run ${runIdx} tick ${t}`);
                run.rewards[t].forEach((expected, agent) => {
                    assert.equal(result.rewards.get(agent), expected, `${envName} run ${runIdx} tick ${t} agent ${agent} reward`);
                });
                for (const info of result.infos.values()) {
                    delivered += info["delivered"] ?? 0;
                }
            }
            const expectedDelivered = run.delivered.reduce((a, b) => a + b, 0);
            if (envName === "overcooked") {
                assert.equal(delivered, expectedDelivered);
            }
        });
    }
}
test("snapshot restore round-trips the kitchen state", async () => {
    const { snapshot, restore } = await import("../src/core/index.js");
    const env = makeEnvFromText(golden.overcooked.config_text);
    const state = env.reset(99n);
    for (let t = 0; t < 10; t++) {
        env.step(state, new Map([[0, t % 7], [1, (t * 3) % 7]]));
    }
    const snap = snapshot(state);
    const back = restore(snap);
    assert.equal(checksumHex(stateChecksum(back)), checksumHex(snap.checksum));
    assert.deepEqual(canonicalBytes(back), snap.payload);
});
