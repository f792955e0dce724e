"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const node_path_1 = require("node:path");
const csv_1 = require("../src/csv");
const errors_1 = require("../src/errors");
const FIXTURES = (0, node_path_1.join)(__dirname, '..', '..', 'fixtures');
(0, node_test_1.test)('readTable parses a real sweep CSV', () => {
    const t = (0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'dandelion-sweep.csv'));
    strict_1.default.deepEqual(t.columns.slice(0, 4), ['n', 'seed', 'boundary_mean', 'central_min']);
    strict_1.default.equal(t.rows.length, 4);
    strict_1.default.equal(t.rows[0].n, '2');
});
(0, node_test_1.test)('readTable rejects a missing file with its path', () => {
    const path = (0, node_path_1.join)(FIXTURES, 'does-not-exist.csv');
    strict_1.default.throws(() => (0, csv_1.readTable)(path), (e) => e instanceof errors_1.PlotError && e.message.includes(path));
});
(0, node_test_1.test)('readTable rejects an empty file as headerless', () => {
    const path = (0, node_path_1.join)(__dirname, 'empty-tmp.csv');
    require('node:fs').writeFileSync(path, '');
    try {
        strict_1.default.throws(() => (0, csv_1.readTable)(path), /no header row/);
    }
    finally {
        require('node:fs').unlinkSync(path);
    }
});
(0, node_test_1.test)('requireColumns names every missing column', () => {
    const t = { path: 'x.csv', columns: ['a', 'b'], rows: [] };
    strict_1.default.throws(() => (0, csv_1.requireColumns)(t, ['a', 'central_min', 'origin_max']), /x\.csv: missing required column\(s\): central_min, origin_max/);
    (0, csv_1.requireColumns)(t, ['a', 'b']);
});
(0, node_test_1.test)('numericColumn converts and pinpoints bad cells', () => {
    const t = {
        path: 'x.csv',
        columns: ['v'],
        rows: [{ v: '1.5' }, { v: 'oops' }],
    };
    strict_1.default.throws(() => (0, csv_1.numericColumn)(t, 'v'), /column v, row 3: not a number: oops/);
    t.rows[1].v = '-2e3';
    strict_1.default.deepEqual((0, csv_1.numericColumn)(t, 'v'), [1.5, -2000]);
});
(0, node_test_1.test)('assertNonEmpty flags a header-only table', () => {
    const t = (0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'cdn-empty.csv'));
    strict_1.default.equal(t.rows.length, 0);
    strict_1.default.throws(() => (0, csv_1.assertNonEmpty)(t), /no data rows to plot/);
});
