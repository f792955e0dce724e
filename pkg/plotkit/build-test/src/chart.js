"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.Frame = exports.MUTED = exports.GRID = exports.AXIS = void 0;
exports.yDomain = yDomain;
exports.xDomainLinear = xDomainLinear;
const scale_1 = require("./scale");
exports.AXIS = '#374151';
exports.GRID = '#e5e7eb';
exports.MUTED = '#6b7280';
/**
 * A fixed-size chart frame: axes, grid, ticks and a legend box, with data
 * mapped into the inner plot area.  Series are added in draw order.
 */
class Frame {
    width = 880;
    height = 560;
    left = 76;
    right = 30;
    top = 64;
    bottom = 66;
    xs;
    ys;
    series = [];
    legend = [];
    opts;
    constructor(opts) {
        this.opts = opts;
        const [xlo, xhi] = opts.xdomain;
        const [ylo, yhi] = opts.ydomain;
        this.xs = opts.xscale === 'log'
            ? (0, scale_1.logScale)(xlo, xhi, this.left, this.width - this.right, opts.xticks ?? [])
            : (0, scale_1.linearScale)(xlo, xhi, this.left, this.width - this.right, opts.xticks);
        this.ys = (0, scale_1.linearScale)(ylo, yhi, this.height - this.bottom, this.top);
    }
    xpix(v) {
        return this.xs.toPix(v);
    }
    ypix(v) {
        return this.ys.toPix(v);
    }
    line(data, color, label, stroke = {}) {
        const pts = data.map(([x, y]) => [this.xpix(x), this.ypix(y)]);
        this.series.push({
            kind: 'polyline',
            points: pts,
            stroke: { color, width: stroke.width ?? 2, dash: stroke.dash },
        });
        if (label) {
            this.legend.push({ label, color, dash: stroke.dash });
        }
    }
    points(data, color, label, r = 3) {
        for (const [x, y] of data) {
            this.series.push({ kind: 'circle', x: this.xpix(x), y: this.ypix(y), r, fill: color });
        }
        if (label) {
            this.legend.push({ label, color, marker: true });
        }
    }
    /** Horizontal reference line across the whole plot area. */
    hline(v, color, label, dash = [6, 4]) {
        const y = this.ypix(v);
        this.series.push({
            kind: 'polyline',
            points: [[this.left, y], [this.width - this.right, y]],
            stroke: { color, width: 1.5, dash },
        });
        if (label) {
            this.legend.push({ label, color, dash });
        }
    }
    /** Legend entry with no drawing of its own (annotates a family of lines). */
    legendOnly(label, color, dash) {
        this.legend.push({ label, color, dash });
    }
    build() {
        const prims = [];
        const o = this.opts;
        const x1 = this.width - this.right;
        const yBot = this.height - this.bottom;
        prims.push({ kind: 'text', x: this.width / 2, y: 30, text: o.title, size: 16,
            anchor: 'middle', color: exports.AXIS, bold: true });
        prims.push({ kind: 'text', x: this.left, y: this.top - 14, text: o.ylabel,
            size: 12, anchor: 'start', color: exports.MUTED });
        const ysteps = this.ys.ticks;
        const ystep = ysteps.length > 1 ? ysteps[1] - ysteps[0] : 1;
        for (const t of ysteps) {
            const y = this.ypix(t);
            prims.push({ kind: 'polyline', points: [[this.left, y], [x1, y]],
                stroke: { color: exports.GRID, width: 1 } });
            prims.push({ kind: 'text', x: this.left - 8, y: y + 4, text: (0, scale_1.tickLabel)(t, ystep),
                size: 12, anchor: 'end', color: exports.MUTED });
        }
        const xsteps = this.xs.ticks;
        const xstep = xsteps.length > 1 ? xsteps[1] - xsteps[0] : 1;
        for (const t of xsteps) {
            const x = this.xpix(t);
            prims.push({ kind: 'polyline', points: [[x, yBot], [x, yBot + 5]],
                stroke: { color: exports.AXIS, width: 1 } });
            prims.push({ kind: 'text', x, y: yBot + 20, text: (0, scale_1.tickLabel)(t, xstep),
                size: 12, anchor: 'middle', color: exports.MUTED });
        }
        prims.push({ kind: 'text', x: (this.left + x1) / 2, y: this.height - 18,
            text: o.xlabel, size: 12, anchor: 'middle', color: exports.MUTED });
        prims.push(...this.series);
        // Axis frame on top of the series so it stays crisp.
        prims.push({ kind: 'polyline',
            points: [[this.left, this.top], [this.left, yBot], [x1, yBot]],
            stroke: { color: exports.AXIS, width: 1.5 } });
        if (this.legend.length > 0) {
            const lineH = 18;
            const boxW = 8 + 26 + 6 + 13 * Math.max(...this.legend.map((e) => e.label.length)) * 0.62;
            const boxH = 10 + lineH * this.legend.length;
            const bx = x1 - boxW - 10;
            const by = this.top + 10;
            prims.push({ kind: 'rect', x: bx, y: by, w: boxW, h: boxH, fill: '#ffffff' });
            prims.push({ kind: 'polyline',
                points: [[bx, by], [bx + boxW, by], [bx + boxW, by + boxH],
                    [bx, by + boxH], [bx, by]],
                stroke: { color: exports.GRID, width: 1 } });
            this.legend.forEach((e, i) => {
                const cy = by + 14 + i * lineH;
                if (e.marker) {
                    prims.push({ kind: 'circle', x: bx + 21, y: cy - 4, r: 3.5, fill: e.color });
                }
                else {
                    prims.push({ kind: 'polyline', points: [[bx + 8, cy - 4], [bx + 34, cy - 4]],
                        stroke: { color: e.color, width: 2, dash: e.dash } });
                }
                prims.push({ kind: 'text', x: bx + 40, y: cy, text: e.label, size: 11,
                    anchor: 'start', color: exports.AXIS });
            });
        }
        return { width: this.width, height: this.height, background: '#ffffff', prims };
    }
}
exports.Frame = Frame;
/** Domain padded by 5% headroom above the data, floored at zero. */
function yDomain(values) {
    const hi = Math.max(...values);
    return [0, hi <= 0 ? 1 : hi * 1.05];
}
function xDomainLinear(values) {
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const ticks = (0, scale_1.niceTicks)(lo, hi);
    return [Math.min(lo, ticks[0]), Math.max(hi, ticks[ticks.length - 1])];
}
