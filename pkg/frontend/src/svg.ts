/**
 * Minimal deterministic SVG assembly for line charts.
 *
 * Everything is plain string building: no DOM, no randomness, no timestamps,
 * so identical inputs produce byte-identical output. Coordinates are rounded
 * to two decimals to keep the files stable across platforms.
 */

export type AxisKind = "linear" | "log";

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  color: string;
  points: Point[];
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: AxisKind;
  yScale: AxisKind;
  series: Series[];
  width?: number;
  height?: number;
  /** Explicit x tick values; computed from the scale kind when omitted. */
  xTicks?: number[];
  /** Force the y domain, e.g. [0, 1] for probabilities. */
  yDomain?: [number, number];
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number): string {
  return value.toFixed(2);
}

/** Short human-readable tick label without float noise. */
export function tickLabel(value: number): string {
  if (value !== 0 && (Math.abs(value) >= 1e4 || Math.abs(value) < 1e-3)) {
    const exp = Math.round(Math.log10(Math.abs(value)));
    const mantissa = value / 10 ** exp;
    const head = Math.abs(mantissa - 1) < 1e-9
      ? (value < 0 ? "-" : "")
      : `${Number(mantissa.toPrecision(3))}·`;
    return `${head}1e${exp}`;
  }
  return String(Number(value.toPrecision(6)));
}

export interface ScaleFn {
  (value: number): number;
}

function makeScale(
  kind: AxisKind,
  domain: [number, number],
  range: [number, number],
): ScaleFn {
  const [d0, d1] = kind === "log"
    ? [Math.log10(domain[0]), Math.log10(domain[1])]
    : domain;
  const span = d1 - d0 || 1;
  return (value: number) => {
    const v = kind === "log" ? Math.log10(value) : value;
    return range[0] + ((v - d0) / span) * (range[1] - range[0]);
  };
}

function linearTicks(min: number, max: number, target = 6): number[] {
  const span = max - min || 1;
  const rawStep = span / target;
  const power = 10 ** Math.floor(Math.log10(rawStep));
  const step = [1, 2, 5, 10].map((m) => m * power)
    .find((s) => span / s <= target) ?? power * 10;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function logTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  const lo = Math.floor(Math.log10(min) - 1e-9);
  const hi = Math.ceil(Math.log10(max) + 1e-9);
  for (let exp = lo; exp <= hi; exp += 1) {
    const value = 10 ** exp;
    if (value >= min * (1 - 1e-9) && value <= max * (1 + 1e-9)) {
      ticks.push(value);
    }
  }
  if (ticks.length >= 2) {
    return ticks;
  }
  // Degenerate log span: fall back to the domain endpoints.
  return min === max ? [min] : [min, max];
}

function domainOf(values: number[], kind: AxisKind): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v) && (kind !== "log" || v > 0));
  if (finite.length === 0) {
    return kind === "log" ? [0.1, 10] : [0, 1];
  }
  let min = Math.min(...finite);
  let max = Math.max(...finite);
  if (min === max) {
    if (kind === "log") {
      min /= 2;
      max *= 2;
    } else {
      min -= 0.5;
      max += 0.5;
    }
  }
  return [min, max];
}

/** Render a framed line chart with axes, ticks, and a legend. */
export function renderChart(options: ChartOptions): string {
  const width = options.width ?? 640;
  const height = options.height ?? 420;
  const margin = { top: 34, right: 16, bottom: 48, left: 64 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;

  const xs = options.series.flatMap((s) => s.points.map((p) => p.x));
  const ys = options.series.flatMap((s) => s.points.map((p) => p.y));
  const xDomain = domainOf(options.xTicks ?? xs, options.xScale);
  const yDomain = options.yDomain ?? domainOf(ys, options.yScale);
  const xScale = makeScale(options.xScale, xDomain, [margin.left, margin.left + plotW]);
  const yScale = makeScale(options.yScale, yDomain, [margin.top + plotH, margin.top]);

  const xTicks = options.xTicks
    ?? (options.xScale === "log"
      ? logTicks(xDomain[0], xDomain[1])
      : linearTicks(xDomain[0], xDomain[1]));
  const yTicks = options.yScale === "log"
    ? logTicks(yDomain[0], yDomain[1])
    : linearTicks(yDomain[0], yDomain[1]);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" `
    + `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${fmt(width / 2)}" y="20" text-anchor="middle" font-size="14" `
    + `fill="#111111">${escapeXml(options.title)}</text>`,
  );

  for (const tick of xTicks) {
    const x = xScale(tick);
    parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(margin.top)}" x2="${fmt(x)}" `
      + `y2="${fmt(margin.top + plotH)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(x)}" y="${fmt(margin.top + plotH + 18)}" text-anchor="middle" `
      + `font-size="11" fill="#333333">${escapeXml(tickLabel(tick))}</text>`,
    );
  }
  for (const tick of yTicks) {
    const y = yScale(tick);
    parts.push(
      `<line x1="${fmt(margin.left)}" y1="${fmt(y)}" x2="${fmt(margin.left + plotW)}" `
      + `y2="${fmt(y)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(margin.left - 8)}" y="${fmt(y + 4)}" text-anchor="end" `
      + `font-size="11" fill="#333333">${escapeXml(tickLabel(tick))}</text>`,
    );
  }

  parts.push(
    `<rect x="${fmt(margin.left)}" y="${fmt(margin.top)}" width="${fmt(plotW)}" `
    + `height="${fmt(plotH)}" fill="none" stroke="#111111" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${fmt(margin.left + plotW / 2)}" y="${fmt(height - 10)}" `
    + `text-anchor="middle" font-size="12" fill="#111111">`
    + `${escapeXml(options.xLabel)}</text>`,
  );
  parts.push(
    `<text x="16" y="${fmt(margin.top + plotH / 2)}" text-anchor="middle" `
    + `font-size="12" fill="#111111" transform="rotate(-90 16 `
    + `${fmt(margin.top + plotH / 2)})">${escapeXml(options.yLabel)}</text>`,
  );

  options.series.forEach((series) => {
    const drawable = series.points.filter(
      (p) => Number.isFinite(p.x) && Number.isFinite(p.y)
        && (options.xScale !== "log" || p.x > 0)
        && (options.yScale !== "log" || p.y > 0),
    );
    const path = drawable
      .map((p) => `${fmt(xScale(p.x))},${fmt(yScale(p.y))}`)
      .join(" ");
    parts.push(
      `<polyline points="${path}" fill="none" stroke="${series.color}" `
      + `stroke-width="1.8" data-series="${escapeXml(series.label)}"/>`,
    );
    for (const p of drawable) {
      parts.push(
        `<circle cx="${fmt(xScale(p.x))}" cy="${fmt(yScale(p.y))}" r="2.6" `
        + `fill="${series.color}"/>`,
      );
    }
  });

  const legendX = margin.left + 10;
  options.series.forEach((series, index) => {
    const y = margin.top + 14 + index * 16;
    parts.push(
      `<line x1="${fmt(legendX)}" y1="${fmt(y - 4)}" x2="${fmt(legendX + 22)}" `
      + `y2="${fmt(y - 4)}" stroke="${series.color}" stroke-width="1.8"/>`,
    );
    parts.push(
      `<text x="${fmt(legendX + 28)}" y="${fmt(y)}" font-size="11" `
      + `fill="#333333">${escapeXml(series.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
