export interface Scale {
  toPix(v: number): number;
  ticks: number[];
}

/** Expands [lo, hi] to a pleasant tick step using the 1-2-5 progression. */
export function niceTicks(lo: number, hi: number, count = 5): number[] {
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
  const out: number[] = [];
  for (let i = first; i <= last; i++) {
    out.push(Number((i * step).toFixed(decimals)));
  }
  return out;
}

export function linearScale(lo: number, hi: number, pixLo: number, pixHi: number,
                            ticks?: number[]): Scale {
  if (hi <= lo) {
    hi = lo + 1;
  }
  const k = (pixHi - pixLo) / (hi - lo);
  return {
    toPix: (v: number) => pixLo + (v - lo) * k,
    ticks: ticks ?? niceTicks(lo, hi),
  };
}

/** Base-10 log scale; every domain value must be positive. */
export function logScale(lo: number, hi: number, pixLo: number, pixHi: number,
                         ticks: number[]): Scale {
  const llo = Math.log10(lo);
  let lhi = Math.log10(hi);
  if (lhi <= llo) {
    lhi = llo + 1;
  }
  const k = (pixHi - pixLo) / (lhi - llo);
  return {
    toPix: (v: number) => pixLo + (Math.log10(v) - llo) * k,
    ticks,
  };
}

/** Label formatter matched to the tick step so every tick prints cleanly. */
export function tickLabel(v: number, step: number): string {
  if (Number.isInteger(v) && Math.abs(v) < 1e15) {
    return String(v);
  }
  const decimals = Math.max(0, -Math.floor(Math.log10(step)));
  return v.toFixed(decimals);
}
