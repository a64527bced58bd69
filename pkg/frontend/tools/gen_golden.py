#!/usr/bin/env python3
"""Generate cross-implementation golden fixtures from the Python engine.

The TypeScript core must reproduce every value in the emitted JSON
exactly; any drift is a real desync bug. Rerun after intentional engine
changes:  python3 tools/gen_golden.py
"""

import json
import sys
from pathlib import Path

from gridplay.core import CounterRng, canonical_bytes, fnv1a64, mix64, state_checksum
from gridplay.envs import make_env, overcooked, search_rescue
from gridplay.replay import episode_seed

OUT = Path(__file__).parent.parent / "tests" / "fixtures" / "golden.json"


def hex64(value: int) -> str:
    return f"{value:016x}"


def rng_vectors():
    out = []
    for seed, counter in ((0, 0), (12345, 0), (2**63 + 17, 41), (987654321, 7)):
        rng = CounterRng(seed, counter)
        out.append({
            "seed": str(seed),
            "counter": str(counter),
            "next": [hex64(rng.next_u64()) for _ in range(5)],
        })
    return out


def env_run(config, seed, script_seed, ticks, scripted=None):
    env = make_env(config)
    state, _ = env.reset(seed=seed)
    rng = CounterRng(script_seed)
    actions_log, checksums, rewards_log, delivered = [], [], [], []
    for t in range(ticks):
        if scripted is not None:
            actions = dict(enumerate(scripted[t]))
        else:
            actions = {a.agent_id: rng.randrange(len(env.action_set))
                       for a in state.agents}
        state, result = env.step(state, actions)
        actions_log.append([actions[a.agent_id] for a in state.agents])
        checksums.append(hex64(state_checksum(state)))
        rewards_log.append([result.rewards[a.agent_id] for a in state.agents])
        delivered.append(sum(int(i.get("delivered", 0))
                             for i in result.infos.values()))
    return {
        "seed": str(seed),
        "actions": actions_log,
        "checksums": checksums,
        "rewards": rewards_log,
        "delivered": delivered,
    }


# Known-good play scripts (cardinal ids): one full soup in the kitchen
# with cook_time=6, and a full clear of the rescue map. These exercise
# every reward path so cross-language float parity is actually checked.
UP, DOWN, LEFT, RIGHT, ACT, TOG, NOP = range(7)

SOUP_CYCLE = (
    [[LEFT, NOP], [ACT, NOP], [RIGHT, NOP], [UP, NOP], [ACT, NOP]] * 3
    + [[LEFT, NOP], [DOWN, NOP], [ACT, NOP], [UP, NOP], [RIGHT, NOP], [UP, NOP]]
    + [[ACT, NOP], [RIGHT, NOP], [DOWN, NOP], [ACT, NOP]]
)

FULL_CLEAR = [
    [ACT, UP], [RIGHT, LEFT], [RIGHT, ACT], [TOG, LEFT], [RIGHT, LEFT],
    [RIGHT, NOP], [TOG, NOP], [ACT, NOP], [LEFT, NOP], [LEFT, NOP],
    [LEFT, NOP], [DOWN, NOP], [LEFT, NOP], [ACT, NOP], [RIGHT, NOP],
    [TOG, NOP], [UP, LEFT], [NOP, LEFT], [NOP, DOWN], [NOP, TOG],
    [RIGHT, RIGHT], [RIGHT, DOWN], [DOWN, RIGHT], [DOWN, NOP], [TOG, TOG],
]


def env_block(config, factory_seed_pairs, ticks, scripted=None):
    env = make_env(config)
    state, _ = env.reset(seed=config.seed)
    runs = [env_run(config, seed, script_seed, ticks)
            for seed, script_seed in factory_seed_pairs]
    if scripted is not None:
        runs.append(env_run(config, config.seed, 0, len(scripted),
                            scripted=scripted))
    return {
        "config_text": config.to_text(),
        "initial_payload_hex": canonical_bytes(state).hex(),
        "initial_checksum": hex64(state_checksum(state)),
        "runs": runs,
    }


def main() -> None:
    oc = overcooked.cramped_room_config(seed=11, cook_time=6).replace(
        features=[], max_ticks=100000)
    sr = search_rescue.search_rescue_config(seed=22).replace(
        features=[], max_ticks=100000)
    golden = {
        "mix64": [{"in": str(x), "out": hex64(mix64(x))}
                  for x in (0, 1, 0x9E3779B97F4A7C15, 2**64 - 1)],
        "fnv1a64": [{"in": s, "out": hex64(fnv1a64(s.encode()))}
                    for s in ("", "a", "foobar", "gridplay")],
        "episode_seed": [{"base": str(b), "episode": e,
                          "out": hex64(episode_seed(b, e))}
                         for b, e in ((0, 0), (11, 0), (11, 1), (11, 2),
                                      (2**48 + 5, 9))],
        "rng": rng_vectors(),
        "overcooked": env_block(oc, [(11, 501), (777, 502)], ticks=80,
                                scripted=SOUP_CYCLE),
        "search_rescue": env_block(sr, [(22, 601), (888, 602)], ticks=80,
                                   scripted=FULL_CLEAR),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(golden, indent=1))
    print(f"wrote {OUT}")


if __name__ == "__main__":
    sys.exit(main())
