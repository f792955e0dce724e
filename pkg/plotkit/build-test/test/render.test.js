"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const node_path_1 = require("node:path");
const pngjs_1 = require("pngjs");
const csv_1 = require("../src/csv");
const figures_1 = require("../src/figures");
const raster_1 = require("../src/raster");
const svg_1 = require("../src/svg");
const FIXTURES = (0, node_path_1.join)(__dirname, '..', '..', 'fixtures');
const sample = () => (0, figures_1.dandelionFigure)((0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'dandelion-sweep.csv')));
(0, node_test_1.test)('svg output is a standalone document', () => {
    const svg = (0, svg_1.figureToSvg)(sample());
    strict_1.default.ok(svg.startsWith('<svg '));
    strict_1.default.ok(svg.includes('width="880"'));
    strict_1.default.ok(svg.includes('height="560"'));
    strict_1.default.ok(svg.trimEnd().endsWith('</svg>'));
    strict_1.default.ok(svg.includes('<polyline'));
    strict_1.default.ok(svg.includes('<text'));
});
(0, node_test_1.test)('svg escapes markup-significant characters in text', () => {
    const fig = {
        width: 100,
        height: 50,
        background: '#ffffff',
        prims: [{
                kind: 'text', x: 5, y: 20, text: 'a<b & c>d',
                size: 12, anchor: 'start', color: '#000000',
            }],
    };
    const svg = (0, svg_1.figureToSvg)(fig);
    strict_1.default.ok(svg.includes('a&lt;b &amp; c&gt;d'));
    strict_1.default.ok(!svg.includes('a<b'));
});
(0, node_test_1.test)('dashed strokes survive serialization', () => {
    const svg = (0, svg_1.figureToSvg)((0, figures_1.cdnFigure)((0, csv_1.readTable)((0, node_path_1.join)(FIXTURES, 'cdn.csv'))));
    strict_1.default.ok(svg.includes('stroke-dasharray="6 4"'));
});
(0, node_test_1.test)('png output decodes to the figure size', () => {
    const buf = (0, raster_1.figureToPng)(sample());
    // PNG signature.
    strict_1.default.deepEqual([...buf.subarray(0, 4)], [0x89, 0x50, 0x4e, 0x47]);
    const img = pngjs_1.PNG.sync.read(buf);
    strict_1.default.equal(img.width, 880);
    strict_1.default.equal(img.height, 560);
    // Corner is background white; the canvas as a whole is not blank.
    strict_1.default.equal(img.data[0], 0xff);
    let dark = 0;
    for (let i = 0; i < img.data.length; i += 4) {
        if (img.data[i] < 0x80) {
            dark++;
        }
    }
    strict_1.default.ok(dark > 500, `only ${dark} dark pixels rendered`);
});
(0, node_test_1.test)('png rendering is byte-deterministic', () => {
    const a = (0, raster_1.figureToPng)(sample());
    const b = (0, raster_1.figureToPng)(sample());
    strict_1.default.ok(a.equals(b));
});
