/**
 * The five figure renderers.
 *
 * Each takes parsed aggregate rows from one harness preset CSV and returns a
 * complete SVG document. Rendering is a pure function of the rows: series
 * are grouped and ordered by sorted keys, so identical CSVs give identical
 * bytes.
 */

import type { AggregateRow } from "./schema.js";
import {
  PALETTE,
  escapeXml,
  renderChart,
  tickLabel,
  type Series,
} from "./svg.js";

export type FigureId = "fig1" | "fig2" | "fig3" | "fig4" | "fig5";

export const FIGURE_IDS: FigureId[] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

/** CSV file name each figure expects inside the input directory. */
export const FIGURE_CSV_NAMES: Record<FigureId, string> = {
  fig1: "fig1_coarray_vs_direct.csv",
  fig2: "fig2_prob_resolution.csv",
  fig3: "fig3_snr_snapshot_grid.csv",
  fig4: "fig4_error_vs_sensors.csv",
  fig5: "fig5_dynamic_range.csv",
};

export interface FigureSpec {
  figureId: FigureId;
  csvPath: string;
  outputPath: string;
}

/** Relative matching distance at or below this renders white. */
export const RELATIVE_MD_WHITE = 0.01;
/** Relative matching distance at or below this (but above white) renders gray. */
export const RELATIVE_MD_GRAY = 0.1;

export type CellClass = "white" | "gray" | "black";

const CELL_FILL: Record<CellClass, string> = {
  white: "#ffffff",
  gray: "#999999",
  black: "#111111",
};

/**
 * Classify a relative matching distance (mean md divided by the true
 * separation) into the three heatmap levels. Non-finite values (cells whose
 * trials all failed) land in the worst class.
 */
export function classifyRelativeMd(relativeMd: number): CellClass {
  if (relativeMd <= RELATIVE_MD_WHITE) {
    return "white";
  }
  if (relativeMd <= RELATIVE_MD_GRAY) {
    return "gray";
  }
  return "black";
}

function sortedUnique(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function groupRows(
  rows: AggregateRow[],
  key: (row: AggregateRow) => string,
): Map<string, AggregateRow[]> {
  const groups = new Map<string, AggregateRow[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(k, [row]);
    }
  }
  return new Map([...groups.entries()].sort(([a], [b]) => a.localeCompare(b)));
}

function series(
  groups: Map<string, AggregateRow[]>,
  x: (row: AggregateRow) => number,
  y: (row: AggregateRow) => number,
): Series[] {
  return [...groups.entries()].map(([label, groupRows], index) => ({
    label,
    color: PALETTE[index % PALETTE.length],
    points: groupRows
      .map((row) => ({ x: x(row), y: y(row) }))
      .sort((a, b) => a.x - b.x),
  }));
}

function renderFig1(rows: AggregateRow[]): string {
  const groups = groupRows(rows, (row) => row.arm);
  return renderChart({
    title: "Matching distance vs SNR",
    xLabel: "SNR (dB)",
    yLabel: "mean matching distance",
    xScale: "linear",
    yScale: "log",
    series: series(groups, (r) => r.snrDb, (r) => r.meanMd),
  });
}

function renderFig2(rows: AggregateRow[]): string {
  const groups = groupRows(
    rows,
    (row) => `${row.arm} @ ${tickLabel(row.snrDb)} dB`,
  );
  return renderChart({
    title: "Probability of resolution vs source separation",
    xLabel: "separation Δ",
    yLabel: "probability of resolution",
    xScale: "log",
    yScale: "linear",
    yDomain: [0, 1],
    series: series(groups, (r) => r.delta, (r) => r.probResolved),
  });
}

/**
 * Stitch independently rendered SVG panels into one grid document. Panels
 * must be full `<svg ...>` strings as produced by the renderers here.
 */
function composePanels(
  panels: { svg: string; width: number; height: number }[],
  columns: number,
  title: string,
): string {
  const rowCount = Math.ceil(panels.length / columns);
  const cellW = Math.max(...panels.map((p) => p.width));
  const cellH = Math.max(...panels.map((p) => p.height));
  const width = columns * cellW;
  const height = rowCount * cellH + 28;
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" `
    + `height="${height}" viewBox="0 0 ${width} ${height}" `
    + `font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="${width / 2}" y="19" text-anchor="middle" font-size="15" `
    + `fill="#111111">${escapeXml(title)}</text>`,
  ];
  panels.forEach((panel, index) => {
    const x = (index % columns) * cellW;
    const y = 28 + Math.floor(index / columns) * cellH;
    parts.push(panel.svg.replace("<svg ", `<svg x="${x}" y="${y}" `));
  });
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function renderHeatmapPanel(
  title: string,
  panelRows: AggregateRow[],
): { svg: string; width: number; height: number } {
  const snapshots = sortedUnique(panelRows.map((r) => r.snapshots));
  const snrs = sortedUnique(panelRows.map((r) => r.snrDb));
  const cellW = 46;
  const cellH = 24;
  const margin = { top: 30, right: 12, bottom: 40, left: 56 };
  const width = margin.left + snapshots.length * cellW + margin.right;
  const height = margin.top + snrs.length * cellH + margin.bottom;
  const byKey = new Map(
    panelRows.map((row) => [`${row.snapshots}|${row.snrDb}`, row]),
  );
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" `
    + `height="${height}" viewBox="0 0 ${width} ${height}" `
    + `font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="${width / 2}" y="18" text-anchor="middle" font-size="12" `
    + `fill="#111111">${escapeXml(title)}</text>`,
  ];
  snrs.forEach((snr, rowIndex) => {
    // Highest SNR on top.
    const y = margin.top + (snrs.length - 1 - rowIndex) * cellH;
    parts.push(
      `<text x="${margin.left - 6}" y="${y + cellH / 2 + 4}" text-anchor="end" `
      + `font-size="10" fill="#333333">${escapeXml(tickLabel(snr))}</text>`,
    );
    snapshots.forEach((snapshotCount, colIndex) => {
      const row = byKey.get(`${snapshotCount}|${snr}`);
      if (row === undefined) {
        return;
      }
      const relative = row.meanMd / row.delta;
      const cls = classifyRelativeMd(relative);
      const x = margin.left + colIndex * cellW;
      const rel = Number.isFinite(relative)
        ? relative.toExponential(6)
        : "nan";
      parts.push(
        `<rect x="${x}" y="${y}" width="${cellW}" height="${cellH}" `
        + `fill="${CELL_FILL[cls]}" stroke="#666666" stroke-width="0.5" `
        + `data-rel="${rel}" data-class="${cls}"/>`,
      );
    });
  });
  snapshots.forEach((snapshotCount, colIndex) => {
    const x = margin.left + colIndex * cellW + cellW / 2;
    parts.push(
      `<text x="${x}" y="${margin.top + snrs.length * cellH + 14}" `
      + `text-anchor="middle" font-size="10" fill="#333333">`
      + `${escapeXml(tickLabel(snapshotCount))}</text>`,
    );
  });
  parts.push(
    `<text x="${margin.left + (snapshots.length * cellW) / 2}" `
    + `y="${height - 10}" text-anchor="middle" font-size="11" `
    + `fill="#111111">snapshots L (SNR in dB on the left)</text>`,
  );
  parts.push("</svg>");
  return { svg: parts.join("\n") + "\n", width, height };
}

function renderFig3(rows: AggregateRow[]): string {
  const groups = groupRows(
    rows,
    (row) => `${row.arm}, Δ=${tickLabel(row.delta)}`,
  );
  const panels = [...groups.entries()].map(([label, panelRows]) =>
    renderHeatmapPanel(label, panelRows),
  );
  const legend = renderHeatmapLegend();
  return composePanels(
    [...panels, legend],
    2,
    "Relative matching distance over the (L, SNR) plane",
  );
}

function renderHeatmapLegend(): { svg: string; width: number; height: number } {
  const entries: [CellClass, string][] = [
    ["white", `relative md ≤ ${RELATIVE_MD_WHITE * 100}%`],
    ["gray", `relative md ≤ ${RELATIVE_MD_GRAY * 100}%`],
    ["black", `relative md > ${RELATIVE_MD_GRAY * 100}%`],
  ];
  const width = 260;
  const height = 110;
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" `
    + `height="${height}" viewBox="0 0 ${width} ${height}" `
    + `font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
  ];
  entries.forEach(([cls, label], index) => {
    const y = 18 + index * 26;
    parts.push(
      `<rect x="14" y="${y}" width="26" height="16" fill="${CELL_FILL[cls]}" `
      + `stroke="#666666" stroke-width="0.5"/>`,
    );
    parts.push(
      `<text x="50" y="${y + 12}" font-size="11" fill="#333333">`
      + `${escapeXml(label)}</text>`,
    );
  });
  parts.push("</svg>");
  return { svg: parts.join("\n") + "\n", width, height };
}

/**
 * Label fig4's per-sensor-count separation levels. The CSV stores resolved
 * numeric separations that differ at each P, so levels are identified by
 * their rank (widest first) within each (arm, P) cell.
 */
function fig4Groups(rows: AggregateRow[]): Map<string, AggregateRow[]> {
  const ranked = new Map<string, number>();
  const cells = groupRows(rows, (row) => `${row.arm}|${row.sensors}`);
  for (const [cellKey, cellRows] of cells) {
    const deltas = [...new Set(cellRows.map((r) => r.delta))]
      .sort((a, b) => b - a);
    deltas.forEach((delta, rank) => {
      ranked.set(`${cellKey}|${delta}`, rank + 1);
    });
  }
  return groupRows(rows, (row) => {
    const rank = ranked.get(`${row.arm}|${row.sensors}|${row.delta}`);
    return `${row.arm}, Δ rank ${rank}`;
  });
}

function renderFig4(rows: AggregateRow[]): string {
  const groups = fig4Groups(rows);
  const sensorTicks = sortedUnique(rows.map((r) => r.sensors));
  const errorPanel = renderChart({
    title: "Coarray covariance error vs sensor count",
    xLabel: "sensors P",
    yLabel: "mean covariance error",
    xScale: "linear",
    yScale: "log",
    xTicks: sensorTicks,
    series: series(groups, (r) => r.sensors, (r) => r.meanCovError),
  });
  const mdPanel = renderChart({
    title: "Matching distance vs sensor count",
    xLabel: "sensors P",
    yLabel: "mean matching distance",
    xScale: "linear",
    yScale: "log",
    xTicks: sensorTicks,
    series: series(groups, (r) => r.sensors, (r) => r.meanMd),
  });
  return composePanels(
    [
      { svg: errorPanel, width: 640, height: 420 },
      { svg: mdPanel, width: 640, height: 420 },
    ],
    2,
    "Growing the array at shrinking separation",
  );
}

function renderFig5(rows: AggregateRow[]): string {
  const groups = groupRows(
    rows,
    (row) => `${row.arm}, p_max/p_min=${tickLabel(row.dynamicRange)}`,
  );
  return renderChart({
    title: "Probability of resolution vs snapshots",
    xLabel: "snapshots L",
    yLabel: "probability of resolution",
    xScale: "log",
    yScale: "linear",
    yDomain: [0, 1],
    series: series(groups, (r) => r.snapshots, (r) => r.probResolved),
  });
}

const RENDERERS: Record<FigureId, (rows: AggregateRow[]) => string> = {
  fig1: renderFig1,
  fig2: renderFig2,
  fig3: renderFig3,
  fig4: renderFig4,
  fig5: renderFig5,
};

/** Render one figure from parsed aggregate rows. */
export function renderFigure(figureId: FigureId, rows: AggregateRow[]): string {
  return RENDERERS[figureId](rows);
}
