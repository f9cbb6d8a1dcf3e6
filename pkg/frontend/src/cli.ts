#!/usr/bin/env node
import { pathToFileURL } from 'node:url';

import { SchemaError } from './csv.js';
import { FIGURE_KINDS, FigureKind } from './series.js';
import { renderFile } from './render.js';

const USAGE = 'usage: lhvapor-figures --input spectrum.csv --figure eps_mu|index|fom --output figure.svg';

function parseArgs(argv: string[]): { input: string; figure: FigureKind; output: string } {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith('--') || value === undefined) {
      throw new Error(USAGE);
    }
    if (opts.has(key)) {
      throw new Error(`${key} given more than once\n${USAGE}`);
    }
    opts.set(key, value);
  }
  const input = opts.get('--input');
  const figure = opts.get('--figure');
  const output = opts.get('--output');
  opts.delete('--input');
  opts.delete('--figure');
  opts.delete('--output');
  if (!input || !figure || !output || opts.size > 0) {
    throw new Error(USAGE);
  }
  if (!(FIGURE_KINDS as string[]).includes(figure)) {
    throw new Error(`unknown figure '${figure}' (expected ${FIGURE_KINDS.join(', ')})`);
  }
  return { input, figure: figure as FigureKind, output };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    renderFile(args.input, args.figure, args.output);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error in ${args.input}: ${err.message}`);
      return 1;
    }
    console.error((err as Error).message);
    return 1;
  }
  console.log(`wrote ${args.output}`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
