/**
 * Strict CSV reading for the experiment artifacts.
 *
 * The files are machine-written (comma-separated, one header row, \n
 * newlines, shortest round-trip decimals), so parsing is deliberately
 * rigid: any structural surprise is an error, never a guess.
 */

import { readFileSync } from "fs";

export class CsvSchemaError extends Error {}

export interface CsvTable {
  header: string[];
  /** Raw cell strings, exactly as they appear in the file. */
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split("\n");
  // A trailing newline produces one empty final entry; drop only that.
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new CsvSchemaError("empty file (no header row)");
  }
  const header = lines[0]!.split(",");
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!.split(",");
    if (cells.length !== header.length) {
      throw new CsvSchemaError(
        `row ${i} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    rows.push(cells);
  }
  return { header, rows };
}

export function readCsvFile(path: string): CsvTable {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Require the exact documented header and at least one data row. */
export function requireSchema(table: CsvTable, expected: string[]): void {
  if (
    table.header.length !== expected.length ||
    !expected.every((name, i) => table.header[i] === name)
  ) {
    throw new CsvSchemaError(
      `header [${table.header.join(",")}] does not match the documented ` +
        `schema [${expected.join(",")}]`,
    );
  }
  if (table.rows.length === 0) {
    throw new CsvSchemaError("no data rows");
  }
}

export function column(table: CsvTable, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvSchemaError(`missing column ${name}`);
  }
  return table.rows.map((r) => r[idx]!);
}

export function numericColumn(table: CsvTable, name: string): number[] {
  return column(table, name).map((cell, i) => {
    const value = Number(cell);
    if (cell.trim() === "" || Number.isNaN(value)) {
      throw new CsvSchemaError(`non-numeric value ${JSON.stringify(cell)} in ${name}[${i}]`);
    }
    return value;
  });
}
