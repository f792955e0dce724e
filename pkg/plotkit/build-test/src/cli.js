#!/usr/bin/env node
"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.run = run;
const fs_1 = require("fs");
const util_1 = require("util");
const csv_1 = require("./csv");
const errors_1 = require("./errors");
const figures_1 = require("./figures");
const raster_1 = require("./raster");
const svg_1 = require("./svg");
const USAGE = `usage: plotkit <kind> -i <metrics.csv> -o <figure.svg|figure.png>

kinds:
  dandelion    central-min and boundary-mean curves vs network size
  cdn          origin/edge occupancy traces with time-average overlays
  skew-growth  skewed neighborhood size vs network size

options:
  -i, --input PATH    metrics CSV produced by the skewnet CLI
  -o, --output PATH   figure file; format chosen by extension (.svg or .png)
      --title TEXT    override the figure title
      --xlabel TEXT   override the x axis label
      --ylabel TEXT   override the y axis label
  -h, --help          show this message
`;
function run(argv) {
    let parsed;
    try {
        parsed = (0, util_1.parseArgs)({
            args: argv,
            allowPositionals: true,
            options: {
                input: { type: 'string', short: 'i' },
                output: { type: 'string', short: 'o' },
                title: { type: 'string' },
                xlabel: { type: 'string' },
                ylabel: { type: 'string' },
                help: { type: 'boolean', short: 'h' },
            },
        });
    }
    catch (err) {
        process.stderr.write(`plotkit: ${err.message}\n${USAGE}`);
        return 1;
    }
    if (parsed.values.help) {
        process.stdout.write(USAGE);
        return 0;
    }
    try {
        const kind = parsed.positionals[0];
        if (!kind) {
            throw new errors_1.PlotError(`missing figure kind\n${USAGE}`);
        }
        const builder = figures_1.BUILDERS[kind];
        if (!builder) {
            throw new errors_1.PlotError(`unknown figure kind: ${kind} (expected ${Object.keys(figures_1.BUILDERS).join(', ')})`);
        }
        if (parsed.positionals.length > 1) {
            throw new errors_1.PlotError(`unexpected argument: ${parsed.positionals[1]}`);
        }
        const input = parsed.values.input;
        const output = parsed.values.output;
        if (!input) {
            throw new errors_1.PlotError('missing required option --input');
        }
        if (!output) {
            throw new errors_1.PlotError('missing required option --output');
        }
        if (!output.endsWith('.svg') && !output.endsWith('.png')) {
            throw new errors_1.PlotError(`output must end in .svg or .png: ${output}`);
        }
        const labels = {
            title: parsed.values.title,
            xlabel: parsed.values.xlabel,
            ylabel: parsed.values.ylabel,
        };
        const figure = builder((0, csv_1.readTable)(input), labels);
        if (output.endsWith('.svg')) {
            (0, fs_1.writeFileSync)(output, (0, svg_1.figureToSvg)(figure), 'utf8');
        }
        else {
            (0, fs_1.writeFileSync)(output, (0, raster_1.figureToPng)(figure));
        }
        return 0;
    }
    catch (err) {
        if (err instanceof errors_1.PlotError) {
            process.stderr.write(`plotkit: ${err.message}\n`);
            return 1;
        }
        throw err;
    }
}
if (require.main === module) {
    process.exit(run(process.argv.slice(2)));
}
