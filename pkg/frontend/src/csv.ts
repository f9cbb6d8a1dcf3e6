/** Reader for the spectrum CSV emitted by the lhvapor sweep command. */

export const REQUIRED_COLUMNS = [
  'dp_over_gamma',
  're_eps',
  'im_eps',
  're_mu',
  'im_mu',
  're_n',
  'im_n',
  'fom',
  'flags',
] as const;

export type ColumnName = (typeof REQUIRED_COLUMNS)[number];

/** One grid sample; numeric cells are null when the producer flagged the point. */
export interface SpectrumRow {
  dp_over_gamma: number;
  re_eps: number | null;
  im_eps: number | null;
  re_mu: number | null;
  im_mu: number | null;
  re_n: number | null;
  im_n: number | null;
  fom: number | null;
  flags: string[];
}

export class SchemaError extends Error {
  readonly columns: string[];

  constructor(message: string, columns: string[]) {
    super(message);
    this.name = 'SchemaError';
    this.columns = columns;
  }
}

function parseCell(name: string, cell: string, line: number): number | null {
  if (cell === '') return null;
  if (cell === 'inf') return Infinity;
  const value = Number(cell);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`line ${line}: column ${name} is not numeric: '${cell}'`, [name]);
  }
  return value;
}

/** Parse a spectrum CSV; missing or extra columns raise a SchemaError naming them. */
export function parseSpectrumCsv(text: string): SpectrumRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError('empty file', [...REQUIRED_COLUMNS]);
  }
  const header = lines[0].split(',');
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  const extra = header.filter((c) => !(REQUIRED_COLUMNS as readonly string[]).includes(c));
  if (missing.length > 0 || extra.length > 0) {
    const parts = [];
    if (missing.length > 0) parts.push(`missing column(s): ${missing.join(', ')}`);
    if (extra.length > 0) parts.push(`unknown column(s): ${extra.join(', ')}`);
    throw new SchemaError(parts.join('; '), [...missing, ...extra]);
  }
  const index = new Map(header.map((c, i) => [c, i]));

  const rows: SpectrumRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(',');
    if (cells.length !== header.length) {
      throw new SchemaError(`line ${i + 1}: expected ${header.length} cells, got ${cells.length}`, []);
    }
    const cell = (name: ColumnName) => cells[index.get(name)!];
    const dp = parseCell('dp_over_gamma', cell('dp_over_gamma'), i + 1);
    if (dp === null) {
      throw new SchemaError(`line ${i + 1}: dp_over_gamma must not be empty`, ['dp_over_gamma']);
    }
    rows.push({
      dp_over_gamma: dp,
      re_eps: parseCell('re_eps', cell('re_eps'), i + 1),
      im_eps: parseCell('im_eps', cell('im_eps'), i + 1),
      re_mu: parseCell('re_mu', cell('re_mu'), i + 1),
      im_mu: parseCell('im_mu', cell('im_mu'), i + 1),
      re_n: parseCell('re_n', cell('re_n'), i + 1),
      im_n: parseCell('im_n', cell('im_n'), i + 1),
      fom: parseCell('fom', cell('fom'), i + 1),
      flags: cell('flags') === '' ? [] : cell('flags').split(';'),
    });
  }
  return rows;
}
