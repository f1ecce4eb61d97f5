#!/usr/bin/env node
/**
 * plotkit render --kind <k> --in <path> --out <path>
 *
 * Single-panel kinds write exactly --out; multi-panel kinds insert the
 * panel name before the extension (report.svg -> report.surface-x.svg).
 * All panels are built before any file is written, so on error nothing
 * is left behind.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { FIGURE_KINDS, renderFigure } from "./render.js";

function usage(): string {
  return (
    "usage: plotkit render --kind <" +
    FIGURE_KINDS.join("|") +
    "> --in <path> --out <path.svg>"
  );
}

function parseArgs(argv: string[]): { kind: string; inPath: string; outPath: string } {
  if (argv[0] !== "render") throw new Error(usage());
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || argv[i + 1] === undefined) {
      throw new Error(usage());
    }
    opts.set(argv[i].slice(2), argv[i + 1]);
  }
  const kind = opts.get("kind");
  const inPath = opts.get("in");
  const outPath = opts.get("out");
  if (!kind || !inPath || !outPath) throw new Error(usage());
  return { kind, inPath, outPath };
}

export function panelPath(outPath: string, name: string, multi: boolean): string {
  if (!multi) return outPath;
  const dot = outPath.lastIndexOf(".");
  if (dot <= 0) return `${outPath}.${name}.svg`;
  return `${outPath.slice(0, dot)}.${name}${outPath.slice(dot)}`;
}

/** Returns the list of files written. Throws on any error, writing nothing. */
export function runCli(argv: string[]): string[] {
  const { kind, inPath, outPath } = parseArgs(argv);
  const text = readFileSync(inPath, "utf8");
  const panels = renderFigure(kind, text, inPath.endsWith(".csv"));
  const multi = panels.length > 1;
  const written: string[] = [];
  for (const p of panels) {
    const path = panelPath(outPath, p.name, multi);
    writeFileSync(path, p.svg);
    written.push(path);
  }
  return written;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");

if (invokedDirectly) {
  try {
    for (const f of runCli(process.argv.slice(2))) console.log(f);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  }
}
