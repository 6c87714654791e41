/**
 * Parsing and validation for coarray-lab experiment CSVs.
 *
 * The harness emits a fixed 12-column table, one row per (arm, grid point),
 * with bare unquoted fields. Parsing is deliberately strict: the header must
 * match the schema exactly and every field must be a well-formed number (or
 * `nan` for the md aggregates of a cell whose trials all failed), so a
 * malformed or foreign CSV fails loudly instead of rendering nonsense.
 */

export const CSV_COLUMNS = [
  "arm",
  "P",
  "L",
  "snr_db",
  "delta",
  "dynamic_range",
  "trials",
  "mean_md",
  "median_md",
  "prob_resolved",
  "mean_cov_error",
  "failures",
] as const;

/** One aggregate row: every numeric cell of the harness schema, typed. */
export interface AggregateRow {
  arm: string;
  sensors: number;
  snapshots: number;
  snrDb: number;
  delta: number;
  dynamicRange: number;
  trials: number;
  meanMd: number;
  medianMd: number;
  probResolved: number;
  meanCovError: number;
  failures: number;
}

/** Raised for any violation of the CSV contract. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

const NUMBER_PATTERN = /^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/;

function parseNumber(field: string, column: string, line: number): number {
  if (field === "nan") {
    return Number.NaN;
  }
  if (!NUMBER_PATTERN.test(field)) {
    throw new SchemaError(
      `line ${line}: column ${column} is not a number: '${field}'`,
    );
  }
  return Number(field);
}

function parseInteger(field: string, column: string, line: number): number {
  const value = parseNumber(field, column, line);
  if (!Number.isInteger(value)) {
    throw new SchemaError(
      `line ${line}: column ${column} must be an integer: '${field}'`,
    );
  }
  return value;
}

function checkHeader(headerLine: string): void {
  const header = headerLine.split(",");
  const expected = CSV_COLUMNS as readonly string[];
  const missing = expected.filter((column) => !header.includes(column));
  const unexpected = header.filter((column) => !expected.includes(column));
  if (missing.length > 0 || unexpected.length > 0) {
    const parts = ["header does not match the harness schema"];
    if (missing.length > 0) {
      parts.push(`missing columns: ${missing.join(", ")}`);
    }
    if (unexpected.length > 0) {
      parts.push(`unexpected columns: ${unexpected.join(", ")}`);
    }
    throw new SchemaError(parts.join("; "));
  }
  if (header.some((column, index) => column !== expected[index])) {
    throw new SchemaError(
      `header columns are out of order: got ${headerLine}`,
    );
  }
}

/**
 * Parse one experiment CSV into typed aggregate rows.
 *
 * @throws SchemaError when the header deviates from the schema, a field is
 *   malformed, or the file holds no data rows.
 */
export function parseAggregateCsv(text: string): AggregateRow[] {
  const lines = text
    .split(/\r?\n/)
    .filter((line, index, all) => line !== "" || index !== all.length - 1);
  if (lines.length === 0 || lines[0] === "") {
    throw new SchemaError("empty CSV: no header line");
  }
  checkHeader(lines[0]);
  const rows: AggregateRow[] = [];
  for (let i = 1; i < lines.length; i += 1) {
    const line = i + 1;
    const fields = lines[i].split(",");
    if (fields.length !== CSV_COLUMNS.length) {
      throw new SchemaError(
        `line ${line}: expected ${CSV_COLUMNS.length} fields, got ${fields.length}`,
      );
    }
    if (fields[0] === "") {
      throw new SchemaError(`line ${line}: empty arm name`);
    }
    rows.push({
      arm: fields[0],
      sensors: parseInteger(fields[1], "P", line),
      snapshots: parseInteger(fields[2], "L", line),
      snrDb: parseNumber(fields[3], "snr_db", line),
      delta: parseNumber(fields[4], "delta", line),
      dynamicRange: parseNumber(fields[5], "dynamic_range", line),
      trials: parseInteger(fields[6], "trials", line),
      meanMd: parseNumber(fields[7], "mean_md", line),
      medianMd: parseNumber(fields[8], "median_md", line),
      probResolved: parseNumber(fields[9], "prob_resolved", line),
      meanCovError: parseNumber(fields[10], "mean_cov_error", line),
      failures: parseInteger(fields[11], "failures", line),
    });
  }
  if (rows.length === 0) {
    throw new SchemaError("empty CSV: no data rows");
  }
  return rows;
}
