#!/usr/bin/env node
/** Command line entry point.
 *
 * Usage: traj-viz render <csv> --x 0 --y 1 --out <svg> [--boxes <yaml>]
 *
 * Exit codes: 0 success, 1 usage or option error, 2 schema error in
 * the trajectory or boxes file.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import YAML from "yaml";

import { SchemaError, parseTrajectory } from "./csv.js";
import { Box, renderSvg } from "./render.js";

function loadBoxes(path: string): Box[] {
  let doc: unknown;
  try {
    doc = YAML.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new SchemaError(`boxes file ${path}: ${(err as Error).message}`);
  }
  const raw = Array.isArray(doc) ? doc : (doc as { boxes?: unknown })?.boxes;
  if (!Array.isArray(raw)) {
    throw new SchemaError(`boxes file ${path}: expected a list of boxes`);
  }
  return raw.map((b, i) => {
    const ok =
      Array.isArray(b) &&
      b.length === 2 &&
      b.every(
        (r) => Array.isArray(r) && r.length === 2 && r.every((v) => typeof v === "number")
      );
    if (!ok) {
      throw new SchemaError(
        `boxes file ${path}: box ${i} must be [[xmin, xmax], [ymin, ymax]]`
      );
    }
    return b as Box;
  });
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        x: { type: "string", default: "0" },
        y: { type: "string", default: "1" },
        out: { type: "string" },
        boxes: { type: "string" },
      },
    });
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  const { positionals, values } = parsed;
  if (positionals.length !== 2 || positionals[0] !== "render" || !values.out) {
    console.error("usage: traj-viz render <csv> --x 0 --y 1 --out <svg> [--boxes <yaml>]");
    return 1;
  }
  const xi = Number(values.x);
  const yi = Number(values.y);
  if (!Number.isInteger(xi) || !Number.isInteger(yi) || xi < 0 || yi < 0) {
    console.error("--x and --y must be non-negative integers");
    return 1;
  }

  let text: string;
  try {
    text = readFileSync(positionals[1], "utf8");
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  try {
    const traj = parseTrajectory(text);
    const boxes = values.boxes ? loadBoxes(values.boxes) : undefined;
    const svg = renderSvg(traj, { x: xi, y: yi, boxes });
    writeFileSync(values.out, svg);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error((err as Error).message);
    return 1;
  }
  console.log(values.out);
  return 0;
}

import { pathToFileURL } from "node:url";

if (process.argv[1] && pathToFileURL(process.argv[1]).href === import.meta.url) {
  process.exit(main(process.argv.slice(2)));
}
