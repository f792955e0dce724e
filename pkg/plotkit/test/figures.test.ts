import assert from 'node:assert/strict';
import { test } from 'node:test';
import { join } from 'node:path';

import { readTable, Table } from '../src/csv';
import { BUILDERS, cdnFigure, dandelionFigure, skewGrowthFigure } from '../src/figures';
import { Polyline, TextItem } from '../src/scene';
import { figureToSvg } from '../src/svg';

const FIXTURES = join(__dirname, '..', '..', 'fixtures');

const texts = (fig: { prims: { kind: string }[] }): string[] =>
  fig.prims.filter((p) => p.kind === 'text').map((p) => (p as TextItem).text);

test('dandelion figure carries both seed-average series and the reference', () => {
  const fig = dandelionFigure(readTable(join(FIXTURES, 'dandelion-sweep.csv')));
  const labels = texts(fig);
  assert.ok(labels.includes('central min (seed avg)'));
  assert.ok(labels.includes('boundary mean (seed avg)'));
  assert.ok(labels.includes('isolated basic reference'));
  assert.ok(labels.includes('Central saturation vs network size'));
});

test('dandelion figure skips the reference line when the column is absent', () => {
  const t = readTable(join(FIXTURES, 'dandelion-sweep.csv'));
  const cut: Table = {
    ...t,
    columns: t.columns.filter((c) => c !== 'basic_ref'),
  };
  const labels = texts(dandelionFigure(cut));
  assert.ok(!labels.includes('isolated basic reference'));
});

test('dandelion figure names a dropped column', () => {
  const t = readTable(join(FIXTURES, 'dandelion-missing-column.csv'));
  assert.throws(() => dandelionFigure(t), /missing required column\(s\): central_min/);
});

test('cdn figure draws four traces plus dashed time averages', () => {
  const fig = cdnFigure(readTable(join(FIXTURES, 'cdn.csv')));
  const dashed = fig.prims.filter(
    (p) => p.kind === 'polyline' && (p as Polyline).stroke.dash !== undefined);
  // Four series averages, the legend swatch, and the y gridlines are dashed;
  // at minimum the four overlays must be there.
  assert.ok(dashed.length >= 4);
  assert.ok(texts(fig).includes('dashed: time averages'));
});

test('cdn figure refuses an empty measurement window', () => {
  const t = readTable(join(FIXTURES, 'cdn-empty.csv'));
  assert.throws(() => cdnFigure(t), /no data rows to plot \(empty measurement window\)/);
});

test('skew-growth figure plots per-seed points and the median line', () => {
  const fig = skewGrowthFigure(readTable(join(FIXTURES, 'random-bipartite-skew.csv')));
  assert.ok(fig.prims.some((p) => p.kind === 'circle'));
  assert.ok(texts(fig).includes('median over seeds'));
});

test('label overrides replace the defaults', () => {
  const t = readTable(join(FIXTURES, 'random-bipartite-skew.csv'));
  const fig = skewGrowthFigure(t, { title: 'T', xlabel: 'X', ylabel: 'Y' });
  const labels = texts(fig);
  for (const want of ['T', 'X', 'Y']) {
    assert.ok(labels.includes(want), `missing ${want}`);
  }
  assert.ok(!labels.includes('Skewed neighborhood growth'));
});

test('every registered builder is deterministic', () => {
  const inputs: Record<string, string> = {
    dandelion: 'dandelion-sweep.csv',
    cdn: 'cdn.csv',
    'skew-growth': 'random-bipartite-skew.csv',
  };
  for (const [kind, file] of Object.entries(inputs)) {
    const build = BUILDERS[kind];
    assert.ok(build, `unregistered kind ${kind}`);
    const path = join(FIXTURES, file);
    const a = figureToSvg(build(readTable(path)));
    const b = figureToSvg(build(readTable(path)));
    assert.equal(a, b, `${kind} output varies between runs`);
  }
});
