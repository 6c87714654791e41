#!/usr/bin/env node
/**
 * render_figs: render coarray-lab preset CSVs to SVG figures.
 *
 * Usage: render_figs <csv-dir> <out-dir> [--figs fig1,fig2,...]
 *
 * Reads each selected figure's CSV from <csv-dir> (by its preset file name),
 * validates it against the harness schema, and writes <out-dir>/<figId>.svg.
 * CSVs are never modified; output is deterministic for identical inputs.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import {
  FIGURE_CSV_NAMES,
  FIGURE_IDS,
  renderFigure,
  type FigureId,
  type FigureSpec,
} from "./figures.js";
import { parseAggregateCsv, SchemaError } from "./schema.js";

const USAGE = "usage: render_figs <csv-dir> <out-dir> [--figs fig1,fig2,...]";

function parseFigList(value: string): FigureId[] {
  const ids = value.split(",").map((token) => token.trim()).filter(Boolean);
  if (ids.length === 0) {
    throw new Error("--figs must name at least one figure");
  }
  for (const id of ids) {
    if (!(FIGURE_IDS as string[]).includes(id)) {
      throw new Error(
        `unknown figure '${id}'; expected any of ${FIGURE_IDS.join(", ")}`,
      );
    }
  }
  return [...new Set(ids)] as FigureId[];
}

/** Resolve CLI arguments into one spec per requested figure. */
export function buildSpecs(
  csvDir: string,
  outDir: string,
  figs?: string,
): FigureSpec[] {
  const ids = figs === undefined ? FIGURE_IDS : parseFigList(figs);
  return ids.map((figureId) => ({
    figureId,
    csvPath: join(csvDir, FIGURE_CSV_NAMES[figureId]),
    outputPath: join(outDir, `${figureId}.svg`),
  }));
}

export function main(argv: string[]): number {
  let positionals: string[];
  let figs: string | undefined;
  try {
    const parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: { figs: { type: "string" } },
    });
    positionals = parsed.positionals;
    figs = parsed.values.figs;
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    console.error(USAGE);
    return 1;
  }
  if (positionals.length !== 2) {
    console.error(USAGE);
    return 1;
  }
  let specs: FigureSpec[];
  try {
    specs = buildSpecs(positionals[0], positionals[1], figs);
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 1;
  }
  for (const spec of specs) {
    let text: string;
    try {
      text = readFileSync(spec.csvPath, "utf8");
    } catch {
      console.error(
        `error: ${spec.figureId}: cannot read CSV ${spec.csvPath}`,
      );
      return 1;
    }
    let svg: string;
    try {
      svg = renderFigure(spec.figureId, parseAggregateCsv(text));
    } catch (error) {
      const reason = error instanceof SchemaError
        ? error.message
        : `render failed: ${(error as Error).message}`;
      console.error(`error: ${spec.figureId}: ${spec.csvPath}: ${reason}`);
      return 1;
    }
    mkdirSync(positionals[1], { recursive: true });
    writeFileSync(spec.outputPath, svg, "utf8");
    console.log(`${spec.figureId} -> ${spec.outputPath}`);
  }
  return 0;
}

if (process.argv[1] !== undefined
  && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
