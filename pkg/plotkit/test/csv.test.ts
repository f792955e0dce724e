import assert from 'node:assert/strict';
import { test } from 'node:test';
import { join } from 'node:path';

import { assertNonEmpty, numericColumn, readTable, requireColumns, Table } from '../src/csv';
import { PlotError } from '../src/errors';

const FIXTURES = join(__dirname, '..', '..', 'fixtures');

test('readTable parses a real sweep CSV', () => {
  const t = readTable(join(FIXTURES, 'dandelion-sweep.csv'));
  assert.deepEqual(
    t.columns.slice(0, 4), ['n', 'seed', 'boundary_mean', 'central_min']);
  assert.equal(t.rows.length, 4);
  assert.equal(t.rows[0].n, '2');
});

test('readTable rejects a missing file with its path', () => {
  const path = join(FIXTURES, 'does-not-exist.csv');
  assert.throws(() => readTable(path),
                (e: unknown) => e instanceof PlotError && e.message.includes(path));
});

test('readTable rejects an empty file as headerless', () => {
  const path = join(__dirname, 'empty-tmp.csv');
  require('node:fs').writeFileSync(path, '');
  try {
    assert.throws(() => readTable(path), /no header row/);
  } finally {
    require('node:fs').unlinkSync(path);
  }
});

test('requireColumns names every missing column', () => {
  const t: Table = { path: 'x.csv', columns: ['a', 'b'], rows: [] };
  assert.throws(() => requireColumns(t, ['a', 'central_min', 'origin_max']),
                /x\.csv: missing required column\(s\): central_min, origin_max/);
  requireColumns(t, ['a', 'b']);
});

test('numericColumn converts and pinpoints bad cells', () => {
  const t: Table = {
    path: 'x.csv',
    columns: ['v'],
    rows: [{ v: '1.5' }, { v: 'oops' }],
  };
  assert.throws(() => numericColumn(t, 'v'), /column v, row 3: not a number: oops/);
  t.rows[1].v = '-2e3';
  assert.deepEqual(numericColumn(t, 'v'), [1.5, -2000]);
});

test('assertNonEmpty flags a header-only table', () => {
  const t = readTable(join(FIXTURES, 'cdn-empty.csv'));
  assert.equal(t.rows.length, 0);
  assert.throws(() => assertNonEmpty(t), /no data rows to plot/);
});
