import { Table, assertNonEmpty, numericColumn, requireColumns } from './csv';
import { Frame, MUTED, xDomainLinear, yDomain } from './chart';
import { Figure } from './scene';
import { niceTicks } from './scale';

export interface Labels {
  title?: string;
  xlabel?: string;
  ylabel?: string;
}

const BLUE = '#2563eb';
const ORANGE = '#ea580c';
const GREEN = '#16a34a';
const RED = '#dc2626';

/** Required columns per figure kind, as emitted by the CLI subcommands. */
export const REQUIRED: Record<string, string[]> = {
  dandelion: ['n', 'boundary_mean', 'central_min', 'boundary_mean_avg', 'central_min_avg'],
  cdn: ['time', 'edge_mean', 'origin_min', 'origin_mean', 'origin_max'],
  'skew-growth': ['n', 'skew_size', 'median_skew_size'],
};

function distinctSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

interface XAxis {
  scale: 'linear' | 'log';
  domain: [number, number];
  ticks: number[];
}

/**
 * Network sizes span decades, so switch to a log axis once the data covers
 * nearly an order of magnitude; ticks sit at the sampled sizes either way.
 */
function sizeAxis(ns: number[]): XAxis {
  const ticks = distinctSorted(ns);
  const lo = ticks[0];
  const hi = ticks[ticks.length - 1];
  if (lo > 0 && hi / lo >= 8) {
    return { scale: 'log', domain: [lo / 1.15, hi * 1.15], ticks };
  }
  const pad = (hi - lo) * 0.06 || 0.5;
  return { scale: 'linear', domain: [lo - pad, hi + pad], ticks };
}

function pairs(xs: number[], ys: number[]): [number, number][] {
  return xs.map((x, i) => [x, ys[i]] as [number, number]);
}

/** Unique (x, y) pairs sorted by x; y is constant per x by construction. */
function levelLine(xs: number[], ys: number[]): [number, number][] {
  const byX = new Map<number, number>();
  xs.forEach((x, i) => byX.set(x, ys[i]));
  return [...byX.entries()].sort((a, b) => a[0] - b[0]);
}

export function dandelionFigure(table: Table, labels: Labels = {}): Figure {
  requireColumns(table, REQUIRED.dandelion);
  assertNonEmpty(table);
  const n = numericColumn(table, 'n');
  const bm = numericColumn(table, 'boundary_mean');
  const cm = numericColumn(table, 'central_min');
  const bmAvg = numericColumn(table, 'boundary_mean_avg');
  const cmAvg = numericColumn(table, 'central_min_avg');
  const ref = table.columns.includes('basic_ref')
    ? numericColumn(table, 'basic_ref') : null;

  const ax = sizeAxis(n);
  const frame = new Frame({
    title: labels.title ?? 'Central saturation vs network size',
    xlabel: labels.xlabel ?? 'dispatchers (n)',
    ylabel: labels.ylabel ?? 'tasks per server (time avg)',
    xdomain: ax.domain,
    ydomain: yDomain([...bm, ...cm, ...(ref ?? [])]),
    xscale: ax.scale,
    xticks: ax.ticks,
  });
  if (ref) {
    frame.hline(ref[0], MUTED, 'isolated basic reference');
  }
  frame.points(pairs(n, cm), '#93c5fd');
  frame.points(pairs(n, bm), '#fdba74');
  frame.line(levelLine(n, cmAvg), BLUE, 'central min (seed avg)');
  frame.line(levelLine(n, bmAvg), ORANGE, 'boundary mean (seed avg)');
  return frame.build();
}

export function cdnFigure(table: Table, labels: Labels = {}): Figure {
  requireColumns(table, REQUIRED.cdn);
  assertNonEmpty(table);
  let rows = table.rows;
  let seedNote = '';
  if (table.columns.includes('seed')) {
    const seeds = distinctSorted(numericColumn(table, 'seed'));
    if (seeds.length > 1) {
      // One trace per figure; the first seed keeps the output deterministic.
      const pick = String(seeds[0]);
      rows = rows.filter((r) => r.seed === pick);
      seedNote = ` (seed ${pick})`;
    }
  }
  const sub: Table = { ...table, rows };
  const t = numericColumn(sub, 'time');
  const seriesDefs: [string, string, string][] = [
    ['edge_mean', BLUE, 'edge mean'],
    ['origin_min', GREEN, 'origin min'],
    ['origin_mean', ORANGE, 'origin mean'],
    ['origin_max', RED, 'origin max'],
  ];
  const values = seriesDefs.map(([c]) => numericColumn(sub, c));
  const overlays: [number, string][] = [];
  for (const [c, color] of seriesDefs) {
    const avgCol = `${c}_tavg`;
    if (table.columns.includes(avgCol)) {
      overlays.push([numericColumn(sub, avgCol)[0], color]);
    }
  }

  const frame = new Frame({
    title: (labels.title ?? 'Origin and edge occupancy over time') + seedNote,
    xlabel: labels.xlabel ?? 'time',
    ylabel: labels.ylabel ?? 'tasks per server',
    xdomain: xDomainLinear(t),
    ydomain: yDomain([...values.flat(), ...overlays.map(([v]) => v)]),
  });
  seriesDefs.forEach(([, color, label], i) => {
    frame.line(pairs(t, values[i]), color, label);
  });
  for (const [v, color] of overlays) {
    frame.hline(v, color);
  }
  if (overlays.length > 0) {
    frame.legendOnly('dashed: time averages', MUTED, [6, 4]);
  }
  return frame.build();
}

export function skewGrowthFigure(table: Table, labels: Labels = {}): Figure {
  requireColumns(table, REQUIRED['skew-growth']);
  assertNonEmpty(table);
  const n = numericColumn(table, 'n');
  const size = numericColumn(table, 'skew_size');
  const median = numericColumn(table, 'median_skew_size');

  const ax = sizeAxis(n);
  const frame = new Frame({
    title: labels.title ?? 'Skewed neighborhood growth',
    xlabel: labels.xlabel ?? 'servers (n)',
    ylabel: labels.ylabel ?? 'max skewed neighborhood size',
    xdomain: ax.domain,
    ydomain: yDomain([...size, ...median]),
    xscale: ax.scale,
    xticks: ax.ticks,
  });
  frame.points(pairs(n, size), '#93c5fd', 'per-seed maximum');
  frame.line(levelLine(n, median), BLUE, 'median over seeds');
  return frame.build();
}

export type FigureBuilder = (table: Table, labels?: Labels) => Figure;

export const BUILDERS: Record<string, FigureBuilder> = {
  dandelion: dandelionFigure,
  cdn: cdnFigure,
  'skew-growth': skewGrowthFigure,
};
