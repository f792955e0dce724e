import { readFileSync } from 'fs';
import { parse } from 'papaparse';

import { PlotError } from './errors';

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, 'utf8');
  } catch (err) {
    throw new PlotError(`cannot read ${path}: ${(err as Error).message}`);
  }
  if (text.trim() === '') {
    throw new PlotError(`${path}: no header row`);
  }
  const parsed = parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: 'greedy',
  });
  // Ragged rows surface later as missing-column or not-a-number errors with
  // row context; a one-column file legitimately has no delimiter at all.
  const ignorable = ['TooFewFields', 'TooManyFields', 'UndetectableDelimiter'];
  const fatal = parsed.errors.find((e) => !ignorable.includes(e.code));
  if (fatal) {
    throw new PlotError(`${path}: malformed CSV: ${fatal.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0) {
    throw new PlotError(`${path}: no header row`);
  }
  return { path, columns, rows: parsed.data };
}

/** Fails fast with every absent column named, so schema drift is obvious. */
export function requireColumns(table: Table, names: string[]): void {
  const missing = names.filter((n) => !table.columns.includes(n));
  if (missing.length > 0) {
    throw new PlotError(`${table.path}: missing required column(s): ${missing.join(', ')}`);
  }
}

export function numericColumn(table: Table, name: string): number[] {
  const out: number[] = [];
  for (let i = 0; i < table.rows.length; i++) {
    const raw = table.rows[i][name];
    const v = Number(raw);
    if (raw === undefined || raw === '' || !Number.isFinite(v)) {
      // Row numbers are 1-based and count the header line.
      throw new PlotError(`${table.path}: column ${name}, row ${i + 2}: not a number: ${raw}`);
    }
    out.push(v);
  }
  return out;
}

export function assertNonEmpty(table: Table): void {
  if (table.rows.length === 0) {
    throw new PlotError(`${table.path}: no data rows to plot (empty measurement window)`);
  }
}
