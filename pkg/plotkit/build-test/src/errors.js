"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.PlotError = void 0;
/** User-facing failure: bad input file, bad schema, bad options. */
class PlotError extends Error {
}
exports.PlotError = PlotError;
