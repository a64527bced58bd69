// Portable deterministic core: everything the browser needs to simulate
// identically to the server.

import { EnvConfig, parseEnvConfig } from "./config.js";
import { GridEnv } from "./engine.js";
import { SCOPE as OVERCOOKED, makeOvercookedEnv, registerOvercooked } from "./overcooked.js";
import { SCOPE as SEARCH_RESCUE, makeSearchRescueEnv, registerSearchRescue } from "./search_rescue.js";

export * from "./config.js";
export * from "./engine.js";
export * from "./grid.js";
export * from "./objects.js";
export * from "./rng.js";
export * from "./snapshot.js";
export { registerOvercooked, registerSearchRescue };

export function makeEnv(config: EnvConfig): GridEnv {
  registerOvercooked();
  registerSearchRescue();
  if (config.scope === OVERCOOKED) return makeOvercookedEnv(config);
  if (config.scope === SEARCH_RESCUE) return makeSearchRescueEnv(config);
  throw new Error(`no environment registered for scope ${config.scope}`);
}

export function makeEnvFromText(configText: string): GridEnv {
  return makeEnv(parseEnvConfig(configText));
}
