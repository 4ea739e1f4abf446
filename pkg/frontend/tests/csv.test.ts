import {describe, expect, it} from 'vitest';
import {
  SchemaError,
  commentNumber,
  isNumericColumn,
  numericColumn,
  parseCsvText,
  readCsvTable,
  requireColumns,
  textColumn,
} from '../src/csv';
import {fixture} from './helpers';

describe('readCsvTable', () => {
  it('splits leading # comments from the table', () => {
    const table = readCsvTable(fixture('decay_series.csv'));
    expect(table.label).toBe('decay_series.csv');
    expect(table.columns).toEqual(['t', 'sup']);
    expect(table.comments.get('q')).toBe('1.5');
    expect(table.comments.get('N')).toBe('3');
    expect(table.comments.get('R')).toBe('2.5');
    expect(table.rows.length).toBe(25);
  });

  it('reads plain tables without comments', () => {
    const table = readCsvTable(fixture('manifest.csv'));
    expect(table.comments.size).toBe(0);
    expect(table.columns).toEqual(['file', 'sha256', 'wall_seconds']);
  });

  it('names the path when the file is unreadable', () => {
    expect(() => readCsvTable(fixture('no_such.csv'))).toThrowError(/cannot read .*no_such\.csv/);
  });
});

describe('column access', () => {
  it('returns numeric columns as numbers', () => {
    const table = readCsvTable(fixture('decay_series.csv'));
    const ts = numericColumn(table, 't');
    expect(ts.every((t) => Number.isFinite(t) && t > 0)).toBe(true);
    expect(ts.length).toBe(table.rows.length);
  });

  it('names the missing column and the file', () => {
    const table = readCsvTable(fixture('decay_series.csv'));
    expect(() => requireColumns(table, ['sup', 'slope'])).toThrowError(
      /column "slope" missing from decay_series\.csv/,
    );
  });

  it('names the offending row for non-numeric cells', () => {
    const table = parseCsvText('x,y\n1,2\n3,oops\n', 'bad.csv');
    expect(() => numericColumn(table, 'y')).toThrowError(
      /column "y" of bad\.csv is not numeric at data row 2/,
    );
  });

  it('treats empty cells as non-numeric', () => {
    const table = readCsvTable(fixture('summary.csv'));
    expect(isNumericColumn(table, 'C_emp')).toBe(true);
    expect(isNumericColumn(table, 'drift')).toBe(false);
    expect(textColumn(table, 'verdict')).toEqual(['pass']);
  });
});

describe('commentNumber', () => {
  it('parses numeric header comments', () => {
    const table = readCsvTable(fixture('supersolution.csv'));
    expect(commentNumber(table, 'tol_res')).toBeGreaterThan(0);
    expect(commentNumber(table, 'N')).toBe(1);
  });

  it('rejects a missing comment by key', () => {
    const table = readCsvTable(fixture('manifest.csv'));
    expect(() => commentNumber(table, 'q')).toThrowError(/"# q=" missing from manifest\.csv/);
  });

  it('rejects a non-numeric comment value', () => {
    const table = parseCsvText('# q=fast\nx,y\n1,2\n', 'odd.csv');
    expect(() => commentNumber(table, 'q')).toThrowError(SchemaError);
  });
});
