/**
 * Pure figure builders: each takes parsed input text and returns named SVG
 * panels. File I/O lives in the CLI so a failed render writes nothing.
 */

import {
  Trajectory,
  WelfuseHistory,
  WeReport,
  parseTrajectory,
  parseTrajectoryCsv,
  parseTrajectorySet,
  parseWelfuseInput,
  parseWeReport,
} from "./schema.js";
import { Bounds, Scale, Svg, boundsOf, heatColor } from "./svg.js";

export const FIGURE_KINDS = [
  "phase-portrait",
  "reward-curve",
  "welfare-history",
  "we-report",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface Panel {
  name: string;
  svg: string;
}

const WIDTH = 480;
const HEIGHT = 360;
const MARGIN = 44;
const SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

function newScale(x: Bounds, y: Bounds): Scale {
  return new Scale(x, y, WIDTH, HEIGHT, MARGIN);
}

export function renderPhasePortrait(trajectories: Trajectory[]): Panel[] {
  if (trajectories.length === 0) {
    throw new Error("phase portrait needs at least one trajectory");
  }
  for (const t of trajectories) {
    if (t.xs[0].length !== 1 || t.ys[0].length !== 1) {
      throw new Error("phase portrait requires one-dimensional strategies");
    }
  }
  const allX = trajectories.flatMap((t) => t.xs.map((v) => v[0]));
  const allY = trajectories.flatMap((t) => t.ys.map((v) => v[0]));
  const scale = newScale(boundsOf(allX), boundsOf(allY));
  const svg = new Svg(WIDTH, HEIGHT);
  const game = String(trajectories[0].metadata["game"] ?? "");
  svg.axes(scale, "x", "y", `${game} phase portrait (${trajectories.length} runs)`);
  const arrowEvery = Math.max(1, Math.floor(trajectories[0].xs.length / 12));
  for (const t of trajectories) {
    const pts: Array<[number, number]> = t.xs.map((v, i) => [
      scale.px(v[0]),
      scale.py(t.ys[i][0]),
    ]);
    svg.polyline(pts, "#9ecae1", 1);
    // direction-only arrows: unit-normalized step direction, fixed length
    for (let i = 0; i + 1 < pts.length; i += arrowEvery) {
      const [x0, y0] = pts[i];
      const [x1, y1] = pts[i + 1];
      svg.arrow(x0, y0, x1 - x0, y1 - y0, 8, "#1f77b4");
    }
    const [ex, ey] = pts[pts.length - 1];
    svg.circle(ex, ey, 2.5, "#d62728");
  }
  return [{ name: "phase-portrait", svg: svg.toString() }];
}

export function renderRewardCurve(t: Trajectory): Panel[] {
  const steps = t.rx.map((_, i) => i);
  const scale = newScale(
    boundsOf([0, steps.length - 1], 0),
    boundsOf([...t.rx, ...t.ry])
  );
  const svg = new Svg(WIDTH, HEIGHT);
  const game = String(t.metadata["game"] ?? "");
  svg.axes(scale, "step", "reward", `${game} rewards`);
  svg.polyline(steps.map((s, i) => [scale.px(s), scale.py(t.rx[i])]),
               SERIES_COLORS[0]);
  svg.polyline(steps.map((s, i) => [scale.px(s), scale.py(t.ry[i])]),
               SERIES_COLORS[1]);
  svg.text(WIDTH - MARGIN, MARGIN + 2, "reward x", 11, "end");
  svg.rect(WIDTH - MARGIN - 72, MARGIN - 6, 10, 10, SERIES_COLORS[0]);
  svg.text(WIDTH - MARGIN, MARGIN + 18, "reward y", 11, "end");
  svg.rect(WIDTH - MARGIN - 72, MARGIN + 10, 10, 10, SERIES_COLORS[1]);
  return [{ name: "reward-curve", svg: svg.toString() }];
}

/** One panel per agent: stacked per-episode welfare assignment counts. */
export function renderWelfareHistory(histories: WelfuseHistory[]): Panel[] {
  return histories.map((h) => {
    const tags = h.welfare_set;
    const episodes = h.episodes;
    const batch = episodes[0].assignments.length;
    const scale = newScale(
      { lo: 0, hi: episodes.length },
      { lo: 0, hi: batch }
    );
    const svg = new Svg(WIDTH, HEIGHT);
    svg.axes(scale, "episode", "assignments",
             `${h.game} welfare choices (agent ${h.agent} vs ${h.opponent})`);
    episodes.forEach((ep, e) => {
      let base = 0;
      tags.forEach((tag, k) => {
        const count = ep.assignments.filter((a) => a === tag).length;
        if (count === 0) return;
        const x0 = scale.px(e + 0.15);
        const x1 = scale.px(e + 0.85);
        const y0 = scale.py(base);
        const y1 = scale.py(base + count);
        svg.rect(x0, y1, x1 - x0, y0 - y1,
                 SERIES_COLORS[k % SERIES_COLORS.length]);
        base += count;
      });
    });
    tags.forEach((tag, k) => {
      svg.rect(WIDTH - MARGIN - 110, MARGIN - 8 + 16 * k, 10, 10,
               SERIES_COLORS[k % SERIES_COLORS.length]);
      svg.text(WIDTH - MARGIN - 96, MARGIN + 16 * k, tag, 11);
    });
    const suffix = histories.length > 1 ? `-agent${h.agent}` : "";
    return { name: `welfare-history${suffix}`, svg: svg.toString() };
  });
}

function heatmap(grid: { x: number[]; y: number[] }, surface: number[][],
                 title: string): Panel {
  const flat = surface.flat();
  const b = boundsOf(flat, 0);
  const maxCells = 101;
  const strideX = Math.max(1, Math.ceil(grid.x.length / maxCells));
  const strideY = Math.max(1, Math.ceil(grid.y.length / maxCells));
  const scale = newScale(boundsOf(grid.x, 0), boundsOf(grid.y, 0));
  const svg = new Svg(WIDTH, HEIGHT);
  for (let i = 0; i < grid.x.length; i += strideX) {
    for (let j = 0; j < grid.y.length; j += strideY) {
      const x0 = scale.px(grid.x[i]);
      const x1 = scale.px(grid.x[Math.min(i + strideX, grid.x.length - 1)]);
      const y0 = scale.py(grid.y[Math.min(j + strideY, grid.y.length - 1)]);
      const y1 = scale.py(grid.y[j]);
      const t = (surface[i][j] - b.lo) / (b.hi - b.lo);
      svg.rect(x0, y0, Math.max(x1 - x0, 1), Math.max(y1 - y0, 1),
               heatColor(t));
    }
  }
  svg.axes(scale, "x", "y", title);
  return { name: title.split(" ")[0], svg: svg.toString() };
}

function curvePanel(name: string, xs: number[], values: number[],
                    xLabel: string, title: string,
                    mark?: number): Panel {
  const scale = newScale(boundsOf(xs, 0), boundsOf(values));
  const svg = new Svg(WIDTH, HEIGHT);
  svg.axes(scale, xLabel, "", title);
  svg.polyline(xs.map((v, i) => [scale.px(v), scale.py(values[i])]),
               SERIES_COLORS[0]);
  if (mark !== undefined) {
    const i = xs.reduce(
      (best, v, k) => (Math.abs(v - mark) < Math.abs(xs[best] - mark) ? k : best),
      0
    );
    svg.circle(scale.px(xs[i]), scale.py(values[i]), 3, "#d62728");
  }
  return { name, svg: svg.toString() };
}

/** Six panels: two reward surfaces, two best-response curves, and the
 * welfare-along-best-response curve for each player. */
export function renderWeReport(r: WeReport): Panel[] {
  return [
    heatmap(r.grid, r.surface_x, `surface-x ${r.game} reward for x`),
    heatmap(r.grid, r.surface_y, `surface-y ${r.game} reward for y`),
    curvePanel("br-y-of-x", r.grid.x, r.br_y_of_x, "x",
               `${r.game} best response of y`, r.profile.x),
    curvePanel("br-x-of-y", r.grid.y, r.br_x_of_y, "y",
               `${r.game} best response of x`, r.profile.y),
    curvePanel("welfare-x", r.grid.x, r.curves.welfare_x, "x",
               `${r.game} ${r.welfare_x} welfare along x's curve`, r.profile.x),
    curvePanel("welfare-y", r.grid.y, r.curves.welfare_y, "y",
               `${r.game} ${r.welfare_y} welfare along y's curve`, r.profile.y),
  ];
}

/** Dispatch on figure kind. `csv` selects the CSV trajectory parser. */
export function renderFigure(kind: string, text: string, csv = false): Panel[] {
  switch (kind as FigureKind) {
    case "phase-portrait":
      return renderPhasePortrait(parseTrajectorySet(text));
    case "reward-curve":
      return renderRewardCurve(csv ? parseTrajectoryCsv(text)
                                   : parseTrajectory(text));
    case "welfare-history":
      return renderWelfareHistory(parseWelfuseInput(text));
    case "we-report":
      return renderWeReport(parseWeReport(text));
    default:
      throw new Error(
        `unknown figure kind ${kind}; expected one of ${FIGURE_KINDS.join(", ")}`
      );
  }
}
