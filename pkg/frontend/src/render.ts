/**
 * Command line entry point: render one hjlab CSV report into an SVG
 * figure.  The plot kind is detected from the header row unless --kind
 * forces one; axis scales likewise have per-kind defaults.
 *
 *   node dist/render.js --in rates.csv --out fig1.svg
 *   node dist/render.js --kind decay --in decay_series.csv --out decay.svg
 */

import yargs = require('yargs');
import {SchemaError} from './csv';
import {PLOT_KINDS, PlotKind} from './kinds';
import {SCALE_KINDS, ScaleKind} from './scale';
import {render} from './plots';

interface Options {
  in: string;
  out: string;
  kind?: string;
  xscale?: string;
  yscale?: string;
}

const args: Options = <any>yargs
  .usage('$0 --in [report.csv] --out [figure.svg]')
  .string('in')
  .describe('in', 'input CSV produced by the hjlab CLI')
  .demand('in')
  .string('out')
  .describe('out', 'output SVG path')
  .demand('out')
  .string('kind')
  .describe('kind', `plot kind: ${PLOT_KINDS.join(' | ')} (default: detect from the header)`)
  .string('xscale')
  .describe('xscale', `x axis scale: ${SCALE_KINDS.join(' | ')}`)
  .string('yscale')
  .describe('yscale', `y axis scale: ${SCALE_KINDS.join(' | ')}`)
  .help('help')
  .parse(process.argv);

function checked<T extends string>(flag: string, value: string | undefined, allowed: T[]): T | undefined {
  if (value === undefined) {
    return undefined;
  }
  if (!(allowed as string[]).includes(value)) {
    console.error(`render: error: --${flag} must be one of ${allowed.join(', ')}, got "${value}"`);
    process.exit(1);
  }
  return value as T;
}

try {
  const kind = render({
    input: args.in,
    output: args.out,
    kind: checked<PlotKind>('kind', args.kind, PLOT_KINDS),
    xscale: checked<ScaleKind>('xscale', args.xscale, SCALE_KINDS),
    yscale: checked<ScaleKind>('yscale', args.yscale, SCALE_KINDS),
  });
  console.log(`${args.out}: ${kind} figure from ${args.in}`);
} catch (err) {
  if (err instanceof SchemaError) {
    console.error(`render: error: ${err.message}`);
    process.exit(1);
  }
  throw err;
}
