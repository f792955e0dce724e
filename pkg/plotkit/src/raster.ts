import { PNG } from 'pngjs';

import { Figure, Prim, Stroke, TextItem } from './scene';
import { GLYPH_H, GLYPH_W, glyphFor } from './font';

type RGB = [number, number, number];

function parseColor(hex: string): RGB {
  const h = hex.replace('#', '');
  return [
    parseInt(h.slice(0, 2), 16),
    parseInt(h.slice(2, 4), 16),
    parseInt(h.slice(4, 6), 16),
  ];
}

class Canvas {
  readonly width: number;
  readonly height: number;
  readonly data: Buffer;

  constructor(width: number, height: number, bg: RGB) {
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

  set(x: number, y: number, c: RGB): void {
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
  stamp(x: number, y: number, t: number, c: RGB): void {
    const lo = -Math.floor((t - 1) / 2);
    const hi = Math.ceil((t - 1) / 2);
    for (let dy = lo; dy <= hi; dy++) {
      for (let dx = lo; dx <= hi; dx++) {
        this.set(Math.round(x) + dx, Math.round(y) + dy, c);
      }
    }
  }

  fillRect(x: number, y: number, w: number, h: number, c: RGB): void {
    for (let yy = Math.round(y); yy < Math.round(y + h); yy++) {
      for (let xx = Math.round(x); xx < Math.round(x + w); xx++) {
        this.set(xx, yy, c);
      }
    }
  }

  fillCircle(cx: number, cy: number, r: number, c: RGB): void {
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
function drawPolyline(cv: Canvas, pts: [number, number][], stroke: Stroke): void {
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
const ADVANCE = (GLYPH_W + 1) * TEXT_SCALE;

function drawText(cv: Canvas, item: TextItem): void {
  const c = parseColor(item.color);
  const w = item.text.length * ADVANCE;
  let x0 = Math.round(item.x);
  if (item.anchor === 'middle') {
    x0 -= Math.round(w / 2);
  } else if (item.anchor === 'end') {
    x0 -= w;
  }
  // The scene's y is the text baseline, as in SVG.
  const y0 = Math.round(item.y) - GLYPH_H * TEXT_SCALE + 1;
  for (let k = 0; k < item.text.length; k++) {
    const rows = glyphFor(item.text[k]);
    for (let gy = 0; gy < GLYPH_H; gy++) {
      for (let gx = 0; gx < GLYPH_W; gx++) {
        if (rows[gy][gx] !== '#') {
          continue;
        }
        for (let sy = 0; sy < TEXT_SCALE; sy++) {
          for (let sx = 0; sx < TEXT_SCALE; sx++) {
            cv.set(x0 + k * ADVANCE + gx * TEXT_SCALE + sx,
                   y0 + gy * TEXT_SCALE + sy, c);
          }
        }
      }
    }
  }
}

function drawPrim(cv: Canvas, p: Prim): void {
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

export function figureToPng(fig: Figure): Buffer {
  const cv = new Canvas(fig.width, fig.height, parseColor(fig.background));
  for (const p of fig.prims) {
    drawPrim(cv, p);
  }
  const png = new PNG({ width: fig.width, height: fig.height });
  cv.data.copy(png.data);
  return PNG.sync.write(png);
}
