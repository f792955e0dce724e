#!/usr/bin/env node
import { writeFileSync } from 'fs';
import { parseArgs } from 'util';

import { readTable } from './csv';
import { PlotError } from './errors';
import { BUILDERS, Labels } from './figures';
import { figureToPng } from './raster';
import { figureToSvg } from './svg';

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

export function run(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
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
  } catch (err) {
    process.stderr.write(`plotkit: ${(err as Error).message}\n${USAGE}`);
    return 1;
  }
  if (parsed.values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  try {
    const kind = parsed.positionals[0];
    if (!kind) {
      throw new PlotError(`missing figure kind\n${USAGE}`);
    }
    const builder = BUILDERS[kind];
    if (!builder) {
      throw new PlotError(
        `unknown figure kind: ${kind} (expected ${Object.keys(BUILDERS).join(', ')})`);
    }
    if (parsed.positionals.length > 1) {
      throw new PlotError(`unexpected argument: ${parsed.positionals[1]}`);
    }
    const input = parsed.values.input;
    const output = parsed.values.output;
    if (!input) {
      throw new PlotError('missing required option --input');
    }
    if (!output) {
      throw new PlotError('missing required option --output');
    }
    if (!output.endsWith('.svg') && !output.endsWith('.png')) {
      throw new PlotError(`output must end in .svg or .png: ${output}`);
    }
    const labels: Labels = {
      title: parsed.values.title,
      xlabel: parsed.values.xlabel,
      ylabel: parsed.values.ylabel,
    };
    const figure = builder(readTable(input), labels);
    if (output.endsWith('.svg')) {
      writeFileSync(output, figureToSvg(figure), 'utf8');
    } else {
      writeFileSync(output, figureToPng(figure));
    }
    return 0;
  } catch (err) {
    if (err instanceof PlotError) {
      process.stderr.write(`plotkit: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
