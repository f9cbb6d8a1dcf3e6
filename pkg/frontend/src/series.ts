/** Column selection per figure kind, with gap and sentinel handling. */

import { SpectrumRow } from './csv.js';

export type FigureKind = 'eps_mu' | 'index' | 'fom';

export const FIGURE_KINDS: FigureKind[] = ['eps_mu', 'index', 'fom'];

export interface Point {
  x: number;
  /** null renders as a gap in the curve */
  y: number | null;
}

export interface Series {
  label: string;
  points: Point[];
}

export interface FigureData {
  series: Series[];
  yLabel: string;
  /** log10 vertical axis (figure of merit spans decades) */
  logY: boolean;
  /** draw a horizontal zero line (real-part panels) */
  zeroLine: boolean;
  /** extra annotation lines drawn under the title */
  notes: string[];
}

function column(rows: SpectrumRow[], pick: (r: SpectrumRow) => number | null, label: string): Series {
  return { label, points: rows.map((r) => ({ x: r.dp_over_gamma, y: pick(r) })) };
}

export function extractFigure(rows: SpectrumRow[], kind: FigureKind): FigureData {
  if (kind === 'eps_mu') {
    return {
      series: [
        column(rows, (r) => r.re_eps, 'Re ε_r'),
        column(rows, (r) => r.im_eps, 'Im ε_r'),
        column(rows, (r) => r.re_mu, 'Re μ_r'),
        column(rows, (r) => r.im_mu, 'Im μ_r'),
      ],
      yLabel: 'relative permittivity / permeability',
      logY: false,
      zeroLine: true,
      notes: [],
    };
  }
  if (kind === 'index') {
    return {
      series: [column(rows, (r) => r.re_n, 'Re n'), column(rows, (r) => r.im_n, 'Im n')],
      yLabel: 'refractive index',
      logY: false,
      zeroLine: true,
      notes: [],
    };
  }
  // figure of merit: sentinel (lossless) points are omitted and counted;
  // non-positive values cannot appear on a log axis and become gaps too
  let sentinels = 0;
  let nonPositive = 0;
  const points: Point[] = rows.map((r) => {
    if (r.fom === null) return { x: r.dp_over_gamma, y: null };
    if (!Number.isFinite(r.fom)) {
      sentinels += 1;
      return { x: r.dp_over_gamma, y: null };
    }
    if (r.fom <= 0) {
      nonPositive += 1;
      return { x: r.dp_over_gamma, y: null };
    }
    return { x: r.dp_over_gamma, y: r.fom };
  });
  const notes: string[] = [];
  if (sentinels > 0) notes.push(`${sentinels} lossless point(s) omitted (infinite figure of merit)`);
  if (nonPositive > 0) notes.push(`${nonPositive} non-positive point(s) omitted from log axis`);
  return {
    series: [{ label: 'FOM', points }],
    yLabel: 'figure of merit',
    logY: true,
    zeroLine: false,
    notes,
  };
}
