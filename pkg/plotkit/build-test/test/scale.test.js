"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const scale_1 = require("../src/scale");
(0, node_test_1.test)('niceTicks picks round steps covering the range', () => {
    strict_1.default.deepEqual((0, scale_1.niceTicks)(0, 10), [0, 2, 4, 6, 8, 10]);
    strict_1.default.deepEqual((0, scale_1.niceTicks)(0, 1), [0, 0.2, 0.4, 0.6, 0.8, 1]);
    const t = (0, scale_1.niceTicks)(3, 97);
    strict_1.default.ok(t[0] >= 3 && t[t.length - 1] <= 97);
    strict_1.default.ok(t.length >= 3);
});
(0, node_test_1.test)('niceTicks labels stay on the step grid', () => {
    for (const v of (0, scale_1.niceTicks)(0, 0.3)) {
        // No 0.30000000000000004-style artifacts.
        strict_1.default.equal(v, Number(v.toFixed(10)));
    }
});
(0, node_test_1.test)('linearScale maps endpoints to the pixel range', () => {
    const s = (0, scale_1.linearScale)(0, 10, 100, 900);
    strict_1.default.equal(s.toPix(0), 100);
    strict_1.default.equal(s.toPix(10), 900);
    strict_1.default.equal(s.toPix(5), 500);
});
(0, node_test_1.test)('logScale spaces decades evenly', () => {
    const s = (0, scale_1.logScale)(10, 1000, 0, 200, [10, 100, 1000]);
    strict_1.default.equal(s.toPix(10), 0);
    strict_1.default.ok(Math.abs(s.toPix(100) - 100) < 1e-9);
    strict_1.default.equal(s.toPix(1000), 200);
});
(0, node_test_1.test)('tickLabel matches precision to the step', () => {
    strict_1.default.equal((0, scale_1.tickLabel)(4, 2), '4');
    strict_1.default.equal((0, scale_1.tickLabel)(0.2, 0.2), '0.2');
    strict_1.default.equal((0, scale_1.tickLabel)(0.25, 0.05), '0.25');
    strict_1.default.equal((0, scale_1.tickLabel)(1000, 500), '1000');
});
