/** User-facing failure: bad input file, bad schema, bad options. */
export class PlotError extends Error {}
