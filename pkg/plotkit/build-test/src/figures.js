"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.BUILDERS = exports.REQUIRED = void 0;
exports.dandelionFigure = dandelionFigure;
exports.cdnFigure = cdnFigure;
exports.skewGrowthFigure = skewGrowthFigure;
const csv_1 = require("./csv");
const chart_1 = require("./chart");
const BLUE = '#2563eb';
const ORANGE = '#ea580c';
const GREEN = '#16a34a';
const RED = '#dc2626';
/** Required columns per figure kind, as emitted by the CLI subcommands. */
exports.REQUIRED = {
    dandelion: ['n', 'boundary_mean', 'central_min', 'boundary_mean_avg', 'central_min_avg'],
    cdn: ['time', 'edge_mean', 'origin_min', 'origin_mean', 'origin_max'],
    'skew-growth': ['n', 'skew_size', 'median_skew_size'],
};
function distinctSorted(values) {
    return [...new Set(values)].sort((a, b) => a - b);
}
/**
 * Network sizes span decades, so switch to a log axis once the data covers
 * nearly an order of magnitude; ticks sit at the sampled sizes either way.
 */
function sizeAxis(ns) {
    const ticks = distinctSorted(ns);
    const lo = ticks[0];
    const hi = ticks[ticks.length - 1];
    if (lo > 0 && hi / lo >= 8) {
        return { scale: 'log', domain: [lo / 1.15, hi * 1.15], ticks };
    }
    const pad = (hi - lo) * 0.06 || 0.5;
    return { scale: 'linear', domain: [lo - pad, hi + pad], ticks };
}
function pairs(xs, ys) {
    return xs.map((x, i) => [x, ys[i]]);
}
/** Unique (x, y) pairs sorted by x; y is constant per x by construction. */
function levelLine(xs, ys) {
    const byX = new Map();
    xs.forEach((x, i) => byX.set(x, ys[i]));
    return [...byX.entries()].sort((a, b) => a[0] - b[0]);
}
function dandelionFigure(table, labels = {}) {
    (0, csv_1.requireColumns)(table, exports.REQUIRED.dandelion);
    (0, csv_1.assertNonEmpty)(table);
    const n = (0, csv_1.numericColumn)(table, 'n');
    const bm = (0, csv_1.numericColumn)(table, 'boundary_mean');
    const cm = (0, csv_1.numericColumn)(table, 'central_min');
    const bmAvg = (0, csv_1.numericColumn)(table, 'boundary_mean_avg');
    const cmAvg = (0, csv_1.numericColumn)(table, 'central_min_avg');
    const ref = table.columns.includes('basic_ref')
        ? (0, csv_1.numericColumn)(table, 'basic_ref') : null;
    const ax = sizeAxis(n);
    const frame = new chart_1.Frame({
        title: labels.title ?? 'Central saturation vs network size',
        xlabel: labels.xlabel ?? 'dispatchers (n)',
        ylabel: labels.ylabel ?? 'tasks per server (time avg)',
        xdomain: ax.domain,
        ydomain: (0, chart_1.yDomain)([...bm, ...cm, ...(ref ?? [])]),
        xscale: ax.scale,
        xticks: ax.ticks,
    });
    if (ref) {
        frame.hline(ref[0], chart_1.MUTED, 'isolated basic reference');
    }
    frame.points(pairs(n, cm), '#93c5fd');
    frame.points(pairs(n, bm), '#fdba74');
    frame.line(levelLine(n, cmAvg), BLUE, 'central min (seed avg)');
    frame.line(levelLine(n, bmAvg), ORANGE, 'boundary mean (seed avg)');
    return frame.build();
}
function cdnFigure(table, labels = {}) {
    (0, csv_1.requireColumns)(table, exports.REQUIRED.cdn);
    (0, csv_1.assertNonEmpty)(table);
    let rows = table.rows;
    let seedNote = '';
    if (table.columns.includes('seed')) {
        const seeds = distinctSorted((0, csv_1.numericColumn)(table, 'seed'));
        if (seeds.length > 1) {
            // One trace per figure; the first seed keeps the output deterministic.
            const pick = String(seeds[0]);
            rows = rows.filter((r) => r.seed === pick);
            seedNote = ` (seed ${pick})`;
        }
    }
    const sub = { ...table, rows };
    const t = (0, csv_1.numericColumn)(sub, 'time');
    const seriesDefs = [
        ['edge_mean', BLUE, 'edge mean'],
        ['origin_min', GREEN, 'origin min'],
        ['origin_mean', ORANGE, 'origin mean'],
        ['origin_max', RED, 'origin max'],
    ];
    const values = seriesDefs.map(([c]) => (0, csv_1.numericColumn)(sub, c));
    const overlays = [];
    for (const [c, color] of seriesDefs) {
        const avgCol = `${c}_tavg`;
        if (table.columns.includes(avgCol)) {
            overlays.push([(0, csv_1.numericColumn)(sub, avgCol)[0], color]);
        }
    }
    const frame = new chart_1.Frame({
        title: (labels.title ?? 'Origin and edge occupancy over time') + seedNote,
        xlabel: labels.xlabel ?? 'time',
        ylabel: labels.ylabel ?? 'tasks per server',
        xdomain: (0, chart_1.xDomainLinear)(t),
        ydomain: (0, chart_1.yDomain)([...values.flat(), ...overlays.map(([v]) => v)]),
    });
    seriesDefs.forEach(([, color, label], i) => {
        frame.line(pairs(t, values[i]), color, label);
    });
    for (const [v, color] of overlays) {
        frame.hline(v, color);
    }
    if (overlays.length > 0) {
        frame.legendOnly('dashed: time averages', chart_1.MUTED, [6, 4]);
    }
    return frame.build();
}
function skewGrowthFigure(table, labels = {}) {
    (0, csv_1.requireColumns)(table, exports.REQUIRED['skew-growth']);
    (0, csv_1.assertNonEmpty)(table);
    const n = (0, csv_1.numericColumn)(table, 'n');
    const size = (0, csv_1.numericColumn)(table, 'skew_size');
    const median = (0, csv_1.numericColumn)(table, 'median_skew_size');
    const ax = sizeAxis(n);
    const frame = new chart_1.Frame({
        title: labels.title ?? 'Skewed neighborhood growth',
        xlabel: labels.xlabel ?? 'servers (n)',
        ylabel: labels.ylabel ?? 'max skewed neighborhood size',
        xdomain: ax.domain,
        ydomain: (0, chart_1.yDomain)([...size, ...median]),
        xscale: ax.scale,
        xticks: ax.ticks,
    });
    frame.points(pairs(n, size), '#93c5fd', 'per-seed maximum');
    frame.line(levelLine(n, median), BLUE, 'median over seeds');
    return frame.build();
}
exports.BUILDERS = {
    dandelion: dandelionFigure,
    cdn: cdnFigure,
    'skew-growth': skewGrowthFigure,
};
