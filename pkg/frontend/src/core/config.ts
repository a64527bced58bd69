// Parser for the server's key = value environment config text.

export interface EnvConfig {
  name: string;
  scope: string;
  layout: string;
  actionMode: "rotational" | "cardinal";
  features: string[];
  rewards: string[];
  maxTicks: number;
  seed: number;
  params: Record<string, number>;
}

export function parseEnvConfig(text: string): EnvConfig {
  const fields: Record<string, string> = {};
  const params: Record<string, number> = {};
  let layoutLines: string[] | null = null;

  const closeLayout = () => {
    if (!layoutLines || !layoutLines.length) throw new Error("layout block is empty");
    const indent = Math.min(
      ...layoutLines.map((l) => l.length - l.trimStart().length));
    fields["layout"] = layoutLines
      .map((l) => l.slice(indent).replace(/\r$/, ""))
      .join("\n");
    layoutLines = null;
  };

  for (const raw of text.split("\n")) {
    if (layoutLines !== null) {
      if (raw.trim() === "" && layoutLines.length === 0) continue;
      if (raw.startsWith(" ") || raw.startsWith("\t")) {
        layoutLines.push(raw);
        continue;
      }
      closeLayout();
    }
    const line = raw.trim();
    if (!line || line.startsWith("#")) continue;
    const eq = line.indexOf("=");
    if (eq < 0) throw new Error(`bad config line: ${raw}`);
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (key === "layout") {
      layoutLines = [];
      continue;
    }
    if (key.startsWith("param.")) {
      params[key.slice("param.".length)] = parseInt(value, 10);
    } else {
      fields[key] = value;
    }
  }
  if (layoutLines !== null) closeLayout();

  for (const required of ["name", "scope", "layout"]) {
    if (!(required in fields)) throw new Error(`missing config key ${required}`);
  }
  const splitList = (v: string | undefined) =>
    (v ?? "").split(",").map((s) => s.trim()).filter((s) => s.length > 0);

  return {
    name: fields["name"],
    scope: fields["scope"],
    layout: fields["layout"],
    actionMode: (fields["action_set"] ?? "cardinal") as "rotational" | "cardinal",
    features: splitList(fields["features"]),
    rewards: splitList(fields["rewards"]),
    maxTicks: parseInt(fields["max_ticks"] ?? "400", 10),
    seed: parseInt(fields["seed"] ?? "0", 10),
    params,
  };
}
