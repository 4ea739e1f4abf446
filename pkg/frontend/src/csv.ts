/**
 * Reader for the CSV reports the hjlab CLI emits.
 *
 * Every report is a plain comma-separated table, optionally preceded by
 * `# key=value` comment lines carrying the parameters the run was made
 * with.  The comments are the contract for guide lines: figures recompute
 * theory exponents from them instead of trusting any fitted column.
 */

import {readFileSync} from 'fs';
import {basename} from 'path';
import {parse as parseCSV} from 'papaparse';

export class SchemaError extends Error {}

export interface CsvTable {
  /** Short name used in error messages (file basename). */
  label: string;
  /** `key -> value` pairs from the leading `# key=value` lines. */
  comments: Map<string, string>;
  /** Column names from the header row, in file order. */
  columns: string[];
  rows: Record<string, string | number | null>[];
}

export function parseCsvText(text: string, label: string): CsvTable {
  const lines = text.split(/\r?\n/);
  const comments = new Map<string, string>();
  let start = 0;
  while (start < lines.length && lines[start].startsWith('#')) {
    const body = lines[start].replace(/^#\s*/, '');
    const eq = body.indexOf('=');
    if (eq > 0) {
      comments.set(body.slice(0, eq).trim(), body.slice(eq + 1).trim());
    }
    start++;
  }
  const table = lines.slice(start).join('\n');
  const parsed = parseCSV(table, {header: true, dynamicTyping: true, skipEmptyLines: true});
  const columns = (parsed.meta.fields ?? []).filter((name) => name !== undefined);
  if (columns.length === 0) {
    throw new SchemaError(`${label}: no header row found`);
  }
  return {label, comments, columns, rows: parsed.data as CsvTable['rows']};
}

export function readCsvTable(path: string): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, 'utf8');
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as NodeJS.ErrnoException).code}`);
  }
  return parseCsvText(text, basename(path));
}

export function requireColumns(table: CsvTable, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(
        `column "${name}" missing from ${table.label} (columns: ${table.columns.join(', ')})`,
      );
    }
  }
}

/** Column as numbers; rejects missing and non-numeric cells by name. */
export function numericColumn(table: CsvTable, name: string): number[] {
  requireColumns(table, [name]);
  return table.rows.map((row, i) => {
    const cell = row[name];
    if (typeof cell !== 'number' || !Number.isFinite(cell)) {
      throw new SchemaError(
        `column "${name}" of ${table.label} is not numeric at data row ${i + 1}: ${JSON.stringify(cell)}`,
      );
    }
    return cell;
  });
}

export function isNumericColumn(table: CsvTable, name: string): boolean {
  return (
    table.columns.includes(name) &&
    table.rows.length > 0 &&
    table.rows.every((row) => typeof row[name] === 'number' && Number.isFinite(row[name] as number))
  );
}

export function textColumn(table: CsvTable, name: string): string[] {
  requireColumns(table, [name]);
  return table.rows.map((row) => {
    const cell = row[name];
    return cell === null || cell === undefined ? '' : String(cell);
  });
}

/** Numeric `# key=value` comment; figures derive guide exponents from these. */
export function commentNumber(table: CsvTable, key: string): number {
  const raw = table.comments.get(key);
  if (raw === undefined) {
    throw new SchemaError(`header comment "# ${key}=" missing from ${table.label}`);
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`header comment "# ${key}=${raw}" of ${table.label} is not a number`);
  }
  return value;
}
