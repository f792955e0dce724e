"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.readTable = readTable;
exports.requireColumns = requireColumns;
exports.numericColumn = numericColumn;
exports.assertNonEmpty = assertNonEmpty;
const fs_1 = require("fs");
const papaparse_1 = require("papaparse");
const errors_1 = require("./errors");
function readTable(path) {
    let text;
    try {
        text = (0, fs_1.readFileSync)(path, 'utf8');
    }
    catch (err) {
        throw new errors_1.PlotError(`cannot read ${path}: ${err.message}`);
    }
    if (text.trim() === '') {
        throw new errors_1.PlotError(`${path}: no header row`);
    }
    const parsed = (0, papaparse_1.parse)(text, {
        header: true,
        skipEmptyLines: 'greedy',
    });
    // Ragged rows surface later as missing-column or not-a-number errors with
    // row context; a one-column file legitimately has no delimiter at all.
    const ignorable = ['TooFewFields', 'TooManyFields', 'UndetectableDelimiter'];
    const fatal = parsed.errors.find((e) => !ignorable.includes(e.code));
    if (fatal) {
        throw new errors_1.PlotError(`${path}: malformed CSV: ${fatal.message}`);
    }
    const columns = parsed.meta.fields ?? [];
    if (columns.length === 0) {
        throw new errors_1.PlotError(`${path}: no header row`);
    }
    return { path, columns, rows: parsed.data };
}
/** Fails fast with every absent column named, so schema drift is obvious. */
function requireColumns(table, names) {
    const missing = names.filter((n) => !table.columns.includes(n));
    if (missing.length > 0) {
        throw new errors_1.PlotError(`${table.path}: missing required column(s): ${missing.join(', ')}`);
    }
}
function numericColumn(table, name) {
    const out = [];
    for (let i = 0; i < table.rows.length; i++) {
        const raw = table.rows[i][name];
        const v = Number(raw);
        if (raw === undefined || raw === '' || !Number.isFinite(v)) {
            // Row numbers are 1-based and count the header line.
            throw new errors_1.PlotError(`${table.path}: column ${name}, row ${i + 2}: not a number: ${raw}`);
        }
        out.push(v);
    }
    return out;
}
function assertNonEmpty(table) {
    if (table.rows.length === 0) {
        throw new errors_1.PlotError(`${table.path}: no data rows to plot (empty measurement window)`);
    }
}
