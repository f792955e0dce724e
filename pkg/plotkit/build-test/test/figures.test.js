"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const node_path_1 = require("node:path");
const csv_1 = require("../src/csv");
const figures_1 = require("../src/figures");
const svg_1 = require("../src/svg");
const FIXTURES = (0, node_path_1.join)(__dirname, '..', '..', 'fixtures');
const texts = (fig) => fig.prims.filter((p) => p.kind === 'text').map((p) => p.text);
(0, node_test_1.test)('dandelion figure carries both seed-average series and the reference', () => {
    const fig = (0, figures_1.dandelionFigure)((0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'dandelion-sweep.csv')));
    const labels = texts(fig);
    strict_1.default.ok(labels.includes('central min (seed avg)'));
    strict_1.default.ok(labels.includes('boundary mean (seed avg)'));
    strict_1.default.ok(labels.includes('isolated basic reference'));
    strict_1.default.ok(labels.includes('Central saturation vs network size'));
});
(0, node_test_1.test)('dandelion figure skips the reference line when the column is absent', () => {
    const t = (0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'dandelion-sweep.csv'));
    const cut = {
        ...t,
        columns: t.columns.filter((c) => c !== 'basic_ref'),
    };
    const labels = texts((0, figures_1.dandelionFigure)(cut));
    strict_1.default.ok(!labels.includes('isolated basic reference'));
});
(0, node_test_1.test)('dandelion figure names a dropped column', () => {
    const t = (0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'dandelion-missing-column.csv'));
    strict_1.default.throws(() => (0, figures_1.dandelionFigure)(t), /missing required column\(s\): central_min/);
});
(0, node_test_1.test)('cdn figure draws four traces plus dashed time averages', () => {
    const fig = (0, figures_1.cdnFigure)((0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'cdn.csv')));
    const dashed = fig.prims.filter((p) => p.kind === 'polyline' && p.stroke.dash !== undefined);
    // Four series averages, the legend swatch, and the y gridlines are dashed;
    // at minimum the four overlays must be there.
    strict_1.default.ok(dashed.length >= 4);
    strict_1.default.ok(texts(fig).includes('dashed: time averages'));
});
(0, node_test_1.test)('cdn figure refuses an empty measurement window', () => {
    const t = (0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'cdn-empty.csv'));
    strict_1.default.throws(() => (0, figures_1.cdnFigure)(t), /no data rows to plot \(empty measurement window\)/);
});
(0, node_test_1.test)('skew-growth figure plots per-seed points and the median line', () => {
    const fig = (0, figures_1.skewGrowthFigure)((0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'random-bipartite-skew.csv')));
    strict_1.default.ok(fig.prims.some((p) => p.kind === 'circle'));
    strict_1.default.ok(texts(fig).includes('median over seeds'));
});
(0, node_test_1.test)('label overrides replace the defaults', () => {
    const t = (0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'random-bipartite-skew.csv'));
    const fig = (0, figures_1.skewGrowthFigure)(t, { title: 'T', xlabel: 'X', ylabel: 'Y' });
    const labels = texts(fig);
    for (const want of ['T', 'X', 'Y']) {
        strict_1.default.ok(labels.includes(want), `missing ${want}`);
    }
    strict_1.default.ok(!labels.includes('Skewed neighborhood growth'));
});
(0, node_test_1.test)('every registered builder is deterministic', () => {
    const inputs = {
        dandelion: 'dandelion-sweep.csv',
        cdn: 'cdn.csv',
        'skew-growth': 'random-bipartite-skew.csv',
    };
    for (const [kind, file] of Object.entries(inputs)) {
        const build = figures_1.BUILDERS[kind];
        strict_1.default.ok(build, `unregistered kind ${kind}`);
        const path = (0, node_path_1.join)(FIXTURES, file);
        const a = (0, svg_1.figureToSvg)(build((0, csv_1.readTable)(path)));
        const b = (0, svg_1.figureToSvg)(build((0, csv_1.readTable)(path)));
        strict_1.default.equal(a, b, `${kind} output varies between runs`);
    }
});
