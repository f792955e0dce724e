"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.niceTicks = niceTicks;
exports.linearScale = linearScale;
exports.logScale = logScale;
exports.tickLabel = tickLabel;
/** Expands [lo, hi] to a pleasant tick step using the 1-2-5 progression. */
function niceTicks(lo, hi, count = 5) {
    if (hi <= lo) {
        hi = lo + 1;
    }
    const raw = (hi - lo) / count;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    let step = mag;
    for (const m of [1, 2, 5, 10]) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    const first = Math.ceil(lo / step - 1e-9);
    const last = Math.floor(hi / step + 1e-9);
    // Round each tick to the step's precision so 6 * 0.05 prints as 0.3,
    // not 0.30000000000000004.
    const decimals = Math.max(0, 1 - Math.floor(Math.log10(step)));
    const out = [];
    for (let i = first; i <= last; i++) {
        out.push(Number((i * step).toFixed(decimals)));
    }
    return out;
}
function linearScale(lo, hi, pixLo, pixHi, ticks) {
    if (hi <= lo) {
        hi = lo + 1;
    }
    const k = (pixHi - pixLo) / (hi - lo);
    return {
        toPix: (v) => pixLo + (v - lo) * k,
        ticks: ticks ?? niceTicks(lo, hi),
    };
}
/** Base-10 log scale; every domain value must be positive. */
function logScale(lo, hi, pixLo, pixHi, ticks) {
    const llo = Math.log10(lo);
    let lhi = Math.log10(hi);
    if (lhi <= llo) {
        lhi = llo + 1;
    }
    const k = (pixHi - pixLo) / (lhi - llo);
    return {
        toPix: (v) => pixLo + (Math.log10(v) - llo) * k,
        ticks,
    };
}
/** Label formatter matched to the tick step so every tick prints cleanly. */
function tickLabel(v, step) {
    if (Number.isInteger(v) && Math.abs(v) < 1e15) {
        return String(v);
    }
    const decimals = Math.max(0, -Math.floor(Math.log10(step)));
    return v.toFixed(decimals);
}
