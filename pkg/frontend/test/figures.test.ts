import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  FIGURE_CSV_NAMES,
  FIGURE_IDS,
  RELATIVE_MD_GRAY,
  RELATIVE_MD_WHITE,
  classifyRelativeMd,
  renderFigure,
  type FigureId,
} from "../src/figures.js";
import { parseAggregateCsv, type AggregateRow } from "../src/schema.js";

const TESTDATA = fileURLToPath(new URL("./testdata", import.meta.url));

function fixtureRows(figureId: FigureId): AggregateRow[] {
  const text = readFileSync(join(TESTDATA, FIGURE_CSV_NAMES[figureId]), "utf8");
  return parseAggregateCsv(text);
}

function seriesLabels(svg: string): string[] {
  return [...svg.matchAll(/data-series="([^"]*)"/g)].map((m) => m[1]);
}

describe("classifyRelativeMd", () => {
  it("maps the documented thresholds", () => {
    expect(RELATIVE_MD_WHITE).toBe(0.01);
    expect(RELATIVE_MD_GRAY).toBe(0.1);
    expect(classifyRelativeMd(0)).toBe("white");
    expect(classifyRelativeMd(0.0099)).toBe("white");
    expect(classifyRelativeMd(0.01)).toBe("white");
    expect(classifyRelativeMd(0.0101)).toBe("gray");
    expect(classifyRelativeMd(0.1)).toBe("gray");
    expect(classifyRelativeMd(0.1001)).toBe("black");
    expect(classifyRelativeMd(5)).toBe("black");
  });

  it("sends failed cells (nan) to the worst class", () => {
    expect(classifyRelativeMd(Number.NaN)).toBe("black");
    expect(classifyRelativeMd(Number.POSITIVE_INFINITY)).toBe("black");
  });
});

describe("renderFigure", () => {
  it("renders every figure from its preset fixture", () => {
    for (const figureId of FIGURE_IDS) {
      const svg = renderFigure(figureId, fixtureRows(figureId));
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    }
  });

  it("is deterministic: identical rows give identical bytes", () => {
    for (const figureId of FIGURE_IDS) {
      const first = renderFigure(figureId, fixtureRows(figureId));
      const second = renderFigure(figureId, fixtureRows(figureId));
      expect(second).toBe(first);
    }
  });

  it("contains no timestamps or random identifiers", () => {
    const svg = renderFigure("fig1", fixtureRows("fig1"));
    expect(svg).not.toMatch(/\b20\d\d-\d\d-\d\d\b/);
    expect(svg).not.toMatch(/id="[0-9a-f]{8}-/);
  });

  it("fig1 draws one series per arm", () => {
    const svg = renderFigure("fig1", fixtureRows("fig1"));
    expect(seriesLabels(svg)).toEqual([
      "nested_coarray",
      "ula_coarray",
      "ula_direct",
    ]);
  });

  it("fig2 draws one series per (arm, SNR) pair", () => {
    const svg = renderFigure("fig2", fixtureRows("fig2"));
    const labels = seriesLabels(svg);
    expect(labels).toHaveLength(4);
    expect(labels).toContain("nested_coarray @ 0 dB");
    expect(labels).toContain("ula_coarray @ -16 dB");
  });

  it("fig4 composes two panels with rank-labelled separation levels", () => {
    const svg = renderFigure("fig4", fixtureRows("fig4"));
    expect((svg.match(/<svg /g) ?? []).length).toBe(3);
    const labels = seriesLabels(svg);
    expect(labels).toHaveLength(8);
    const unique = new Set(labels);
    expect(unique).toEqual(
      new Set([
        "nested_coarray, Δ rank 1",
        "nested_coarray, Δ rank 2",
        "ula_coarray, Δ rank 1",
        "ula_coarray, Δ rank 2",
      ]),
    );
  });

  it("fig5 draws one series per (arm, dynamic range) pair", () => {
    const svg = renderFigure("fig5", fixtureRows("fig5"));
    const labels = seriesLabels(svg);
    expect(labels).toHaveLength(4);
    expect(labels).toContain("nested_coarray, p_max/p_min=10");
    expect(labels).toContain("ula_coarray, p_max/p_min=1");
  });
});

describe("fig3 heatmap", () => {
  interface Cell {
    rel: string;
    cls: string;
  }

  function extractCells(svg: string): Cell[] {
    return [...svg.matchAll(/data-rel="([^"]*)" data-class="([^"]*)"/g)].map(
      (m) => ({ rel: m[1], cls: m[2] }),
    );
  }

  it("emits one cell per CSV row", () => {
    const rows = fixtureRows("fig3");
    const cells = extractCells(renderFigure("fig3", rows));
    expect(cells).toHaveLength(rows.length);
  });

  it("classifies every cell by the value recomputed from the CSV", () => {
    const rows = fixtureRows("fig3");
    const svg = renderFigure("fig3", rows);
    const cells = extractCells(svg);

    // Each cell's class must match its own embedded relative md.
    for (const cell of cells) {
      const relative = cell.rel === "nan" ? Number.NaN : Number(cell.rel);
      expect(cell.cls).toBe(classifyRelativeMd(relative));
    }

    // And the multiset of (relative md, class) pairs must equal what the
    // CSV itself implies, so the SVG reflects the data it claims to plot.
    const encode = (relative: number, cls: string) =>
      `${Number.isFinite(relative) ? relative.toExponential(6) : "nan"}|${cls}`;
    const fromCsv = rows
      .map((row) => {
        const relative = row.meanMd / row.delta;
        return encode(relative, classifyRelativeMd(relative));
      })
      .sort();
    const fromSvg = cells.map((cell) => `${cell.rel}|${cell.cls}`).sort();
    expect(fromSvg).toEqual(fromCsv);
  });

  it("covers more than one class on the fixture grid", () => {
    const svg = renderFigure("fig3", fixtureRows("fig3"));
    const classes = new Set(extractCells(svg).map((cell) => cell.cls));
    expect(classes.size).toBeGreaterThan(1);
  });

  it("includes a legend naming the 1% and 10% thresholds", () => {
    const svg = renderFigure("fig3", fixtureRows("fig3"));
    expect(svg).toContain("relative md ≤ 1%");
    expect(svg).toContain("relative md ≤ 10%");
    expect(svg).toContain("relative md &gt; 10%");
  });
});
