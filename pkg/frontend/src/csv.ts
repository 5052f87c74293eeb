import { readFileSync } from "node:fs";

/**
 * Column-oriented numeric trace parsed from a simulator CSV file.
 *
 * The on-disk contract is a single header line of comma-separated
 * column names followed by one comma-separated row of decimal floats
 * per sample (17 significant digits, so values round-trip exactly).
 */
export interface Trace {
  /** Column names exactly as they appear in the header line. */
  columns: string[];
  /** One numeric array per column, all of equal length. */
  data: number[][];
  /** Source path, kept for error messages. */
  path: string;
}

/**
 * Parses a trace CSV file.
 *
 * A header-only file yields a trace with zero rows, which is a
 * legitimate output of a zero-duration run.
 *
 * @param path the CSV file to read
 * @returns the parsed columns
 * @throws Error when the file is empty, a row has the wrong number of
 *   fields, or a cell does not parse as a finite-or-infinite number
 */
export function readTraceCsv(path: string): Trace {
  const text = readFileSync(path, "ascii");
  const lines = text.split("\n");
  // A trailing newline produces one empty final entry; drop it.
  while (lines.length > 0 && lines[lines.length - 1].trim() === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const columns = lines[0].trim().split(",");
  const data: number[][] = columns.map(() => []);
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].trim().split(",");
    if (fields.length !== columns.length) {
      throw new Error(
        `${path}: row ${i} has ${fields.length} fields, ` +
          `header has ${columns.length}`
      );
    }
    for (let j = 0; j < fields.length; j++) {
      const value = Number(fields[j]);
      if (fields[j].trim() === "" || Number.isNaN(value)) {
        throw new Error(
          `${path}: row ${i}, column '${columns[j]}': ` +
            `'${fields[j]}' is not a number`
        );
      }
      data[j].push(value);
    }
  }
  return { columns, data, path };
}

/** Number of samples in a trace. */
export function rowCount(trace: Trace): number {
  return trace.data.length > 0 ? trace.data[0].length : 0;
}

/**
 * Looks up a column by name.
 *
 * @throws Error naming the available columns when `name` is absent
 */
export function columnOf(trace: Trace, name: string): number[] {
  const index = trace.columns.indexOf(name);
  if (index < 0) {
    throw new Error(
      `${trace.path}: no column '${name}' ` +
        `(columns: ${trace.columns.join(", ")})`
    );
  }
  return trace.data[index];
}
