/**
 * Parsers for the schema-1 JSON/CSV documents emitted by the welfeq CLI.
 * Every parser throws a plain Error on schema mismatch; nothing here
 * touches the filesystem.
 */

export interface Trajectory {
  metadata: Record<string, unknown>;
  xs: number[][];
  ys: number[][];
  rx: number[];
  ry: number[];
}

export interface WelfuseEpisode {
  assignments: string[];
  final_rewards: number[];
}

export interface WelfuseHistory {
  game: string;
  agent: number;
  opponent: string;
  welfare_set: string[];
  episodes: WelfuseEpisode[];
}

export interface WeReport {
  game: string;
  welfare_x: string;
  welfare_y: string;
  grid: { x: number[]; y: number[] };
  surface_x: number[][];
  surface_y: number[][];
  br_y_of_x: number[];
  br_x_of_y: number[];
  curves: { welfare_x: number[]; welfare_y: number[] };
  profile: { x: number; y: number };
}

function fail(kind: string, why: string): never {
  throw new Error(`invalid ${kind} document: ${why}`);
}

function checkHeader(doc: unknown, kind: string): Record<string, unknown> {
  if (typeof doc !== "object" || doc === null) fail(kind, "not an object");
  const d = doc as Record<string, unknown>;
  if (d["schema"] !== 1) fail(kind, `schema is ${d["schema"]}, expected 1`);
  if (d["kind"] !== kind) fail(kind, `kind is ${d["kind"]}`);
  return d;
}

function numberMatrix(v: unknown, kind: string, field: string): number[][] {
  if (!Array.isArray(v) || v.some((row) => !Array.isArray(row))) {
    fail(kind, `${field} is not a 2D array`);
  }
  return v as number[][];
}

function numberVector(v: unknown, kind: string, field: string): number[] {
  if (!Array.isArray(v) || v.some((e) => typeof e !== "number")) {
    fail(kind, `${field} is not a numeric array`);
  }
  return v as number[];
}

function trajectoryFromDict(d: Record<string, unknown>): Trajectory {
  const t: Trajectory = {
    metadata: (d["metadata"] ?? {}) as Record<string, unknown>,
    xs: numberMatrix(d["xs"], "trajectory", "xs"),
    ys: numberMatrix(d["ys"], "trajectory", "ys"),
    rx: numberVector(d["rx"], "trajectory", "rx"),
    ry: numberVector(d["ry"], "trajectory", "ry"),
  };
  const n = t.xs.length;
  if (t.ys.length !== n || t.rx.length !== n || t.ry.length !== n) {
    fail("trajectory", "arrays disagree on length");
  }
  return t;
}

export function parseTrajectory(text: string): Trajectory {
  const d = checkHeader(JSON.parse(text), "trajectory");
  return trajectoryFromDict(d);
}

export function parseTrajectorySet(text: string): Trajectory[] {
  const d = checkHeader(JSON.parse(text), "trajectory_set");
  const recs = d["trajectories"];
  if (!Array.isArray(recs)) fail("trajectory_set", "trajectories missing");
  return recs.map((r) =>
    trajectoryFromDict(checkHeader(r, "trajectory"))
  );
}

/** CSV trajectory: optional leading `#meta {json}` line, then
 * step,x0..,y0..,r_x,r_y rows. */
export function parseTrajectoryCsv(text: string): Trajectory {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  let metadata: Record<string, unknown> = {};
  let start = 0;
  if (lines[0]?.startsWith("#meta ")) {
    metadata = JSON.parse(lines[0].slice(6));
    start = 1;
  }
  const header = lines[start]?.split(",") ?? [];
  if (header[0] !== "step") fail("trajectory csv", "missing step header");
  const dx = header.filter((h) => /^x\d+$/.test(h)).length;
  const dy = header.filter((h) => /^y\d+$/.test(h)).length;
  if (dx === 0 || dy === 0) fail("trajectory csv", "missing x/y columns");
  const xs: number[][] = [];
  const ys: number[][] = [];
  const rx: number[] = [];
  const ry: number[] = [];
  for (const line of lines.slice(start + 1)) {
    const cells = line.split(",").map(Number);
    if (cells.length !== header.length || cells.some(Number.isNaN)) {
      fail("trajectory csv", `bad row: ${line}`);
    }
    xs.push(cells.slice(1, 1 + dx));
    ys.push(cells.slice(1 + dx, 1 + dx + dy));
    rx.push(cells[1 + dx + dy]);
    ry.push(cells[2 + dx + dy]);
  }
  if (xs.length === 0) fail("trajectory csv", "no data rows");
  return { metadata, xs, ys, rx, ry };
}

function historyFromDict(d: Record<string, unknown>): WelfuseHistory {
  const episodes = d["episodes"];
  if (!Array.isArray(episodes) || episodes.length === 0) {
    fail("welfuse_history", "episodes missing or empty");
  }
  return {
    game: String(d["game"]),
    agent: Number(d["agent"]),
    opponent: String(d["opponent"]),
    welfare_set: (d["welfare_set"] as string[]) ?? [],
    episodes: episodes.map((e: Record<string, unknown>) => ({
      assignments: e["assignments"] as string[],
      final_rewards: numberVector(
        e["final_rewards"], "welfuse_history", "final_rewards"),
    })),
  };
}

/** Accepts a single history or a self-play pair; returns one entry per agent. */
export function parseWelfuseInput(text: string): WelfuseHistory[] {
  const doc = JSON.parse(text) as Record<string, unknown>;
  if (doc?.["kind"] === "welfuse_history_pair") {
    if (doc["schema"] !== 1) fail("welfuse_history_pair", "bad schema");
    return [
      historyFromDict(checkHeader(doc["x"], "welfuse_history")),
      historyFromDict(checkHeader(doc["y"], "welfuse_history")),
    ];
  }
  return [historyFromDict(checkHeader(doc, "welfuse_history"))];
}

export function parseWeReport(text: string): WeReport {
  const d = checkHeader(JSON.parse(text), "we_report");
  const grid = d["grid"] as Record<string, unknown>;
  const curves = d["curves"] as Record<string, unknown>;
  if (!grid || !curves) fail("we_report", "grid or curves missing");
  return {
    game: String(d["game"]),
    welfare_x: String(d["welfare_x"]),
    welfare_y: String(d["welfare_y"]),
    grid: {
      x: numberVector(grid["x"], "we_report", "grid.x"),
      y: numberVector(grid["y"], "we_report", "grid.y"),
    },
    surface_x: numberMatrix(d["surface_x"], "we_report", "surface_x"),
    surface_y: numberMatrix(d["surface_y"], "we_report", "surface_y"),
    br_y_of_x: numberVector(d["br_y_of_x"], "we_report", "br_y_of_x"),
    br_x_of_y: numberVector(d["br_x_of_y"], "we_report", "br_x_of_y"),
    curves: {
      welfare_x: numberVector(curves["welfare_x"], "we_report", "welfare_x"),
      welfare_y: numberVector(curves["welfare_y"], "we_report", "welfare_y"),
    },
    profile: d["profile"] as { x: number; y: number },
  };
}
