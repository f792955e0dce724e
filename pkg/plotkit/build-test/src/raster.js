"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.figureToPng = figureToPng;
const pngjs_1 = require("pngjs");
const font_1 = require("./font");
function parseColor(hex) {
    const h = hex.replace('#', '');
    return [
        parseInt(h.slice(0, 2), 16),
        parseInt(h.slice(2, 4), 16),
        parseInt(h.slice(4, 6), 16),
    ];
}
class Canvas {
    width;
    height;
    data;
    constructor(width, height, bg) {
        this.width = width;
        this.height = height;
        this.data = Buffer.alloc(width * height * 4);
        for (let i = 0; i < width * height; i++) {
            this.data[i * 4] = bg[0];
            this.data[i * 4 + 1] = bg[1];
            this.data[i * 4 + 2] = bg[2];
            this.data[i * 4 + 3] = 255;
        }
    }
    set(x, y, c) {
        if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
            return;
        }
        const i = (y * this.width + x) * 4;
        this.data[i] = c[0];
        this.data[i + 1] = c[1];
        this.data[i + 2] = c[2];
        this.data[i + 3] = 255;
    }
    /** Square stamp centred on (x, y); side t gives the line its thickness. */
    stamp(x, y, t, c) {
        const lo = -Math.floor((t - 1) / 2);
        const hi = Math.ceil((t - 1) / 2);
        for (let dy = lo; dy <= hi; dy++) {
            for (let dx = lo; dx <= hi; dx++) {
                this.set(Math.round(x) + dx, Math.round(y) + dy, c);
            }
        }
    }
    fillRect(x, y, w, h, c) {
        for (let yy = Math.round(y); yy < Math.round(y + h); yy++) {
            for (let xx = Math.round(x); xx < Math.round(x + w); xx++) {
                this.set(xx, yy, c);
            }
        }
    }
    fillCircle(cx, cy, r, c) {
        const r2 = r * r;
        for (let dy = -Math.ceil(r); dy <= Math.ceil(r); dy++) {
            for (let dx = -Math.ceil(r); dx <= Math.ceil(r); dx++) {
                if (dx * dx + dy * dy <= r2) {
                    this.set(Math.round(cx) + dx, Math.round(cy) + dy, c);
                }
            }
        }
    }
}
/**
 * Walks the polyline in unit steps, toggling pen-down according to the dash
 * pattern so dashes flow continuously across segment joins.
 */
function drawPolyline(cv, pts, stroke) {
    const c = parseColor(stroke.color);
    const t = Math.max(1, Math.round(stroke.width));
    const [on, off] = stroke.dash ?? [Infinity, 0];
    let dist = 0;
    for (let s = 0; s + 1 < pts.length; s++) {
        const [x0, y0] = pts[s];
        const [x1, y1] = pts[s + 1];
        const len = Math.hypot(x1 - x0, y1 - y0);
        const steps = Math.max(1, Math.ceil(len));
        for (let i = 0; i <= steps; i++) {
            const f = i / steps;
            const phase = (dist + f * len) % (on + off);
            if (phase <= on) {
                cv.stamp(x0 + (x1 - x0) * f, y0 + (y1 - y0) * f, t, c);
            }
        }
        dist += len;
    }
}
const TEXT_SCALE = 2;
const ADVANCE = (font_1.GLYPH_W + 1) * TEXT_SCALE;
function drawText(cv, item) {
    const c = parseColor(item.color);
    const w = item.text.length * ADVANCE;
    let x0 = Math.round(item.x);
    if (item.anchor === 'middle') {
        x0 -= Math.round(w / 2);
    }
    else if (item.anchor === 'end') {
        x0 -= w;
    }
    // The scene's y is the text baseline, as in SVG.
    const y0 = Math.round(item.y) - font_1.GLYPH_H * TEXT_SCALE + 1;
    for (let k = 0; k < item.text.length; k++) {
        const rows = (0, font_1.glyphFor)(item.text[k]);
        for (let gy = 0; gy < font_1.GLYPH_H; gy++) {
            for (let gx = 0; gx < font_1.GLYPH_W; gx++) {
                if (rows[gy][gx] !== '#') {
                    continue;
                }
                for (let sy = 0; sy < TEXT_SCALE; sy++) {
                    for (let sx = 0; sx < TEXT_SCALE; sx++) {
                        cv.set(x0 + k * ADVANCE + gx * TEXT_SCALE + sx, y0 + gy * TEXT_SCALE + sy, c);
                    }
                }
            }
        }
    }
}
function drawPrim(cv, p) {
    switch (p.kind) {
        case 'polyline':
            drawPolyline(cv, p.points, p.stroke);
            break;
        case 'circle':
            cv.fillCircle(p.x, p.y, p.r, parseColor(p.fill));
            break;
        case 'rect':
            cv.fillRect(p.x, p.y, p.w, p.h, parseColor(p.fill));
            break;
        case 'text':
            drawText(cv, p);
            break;
    }
}
function figureToPng(fig) {
    const cv = new Canvas(fig.width, fig.height, parseColor(fig.background));
    for (const p of fig.prims) {
        drawPrim(cv, p);
    }
    const png = new pngjs_1.PNG({ width: fig.width, height: fig.height });
    cv.data.copy(png.data);
    return pngjs_1.PNG.sync.write(png);
}
