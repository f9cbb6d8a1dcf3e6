import { readFileSync, writeFileSync } from 'node:fs';

import { parseSpectrumCsv, SpectrumRow } from './csv.js';
import { extractFigure, FigureData, FigureKind } from './series.js';
import { renderChart } from './svg.js';

const TITLES: Record<FigureKind, string> = {
  eps_mu: 'Permittivity and permeability vs probe detuning',
  index: 'Complex refractive index vs probe detuning',
  fom: 'Figure of merit vs probe detuning',
};

export function renderSpectrum(csvText: string, figure: FigureKind): { svg: string; data: FigureData } {
  const rows: SpectrumRow[] = parseSpectrumCsv(csvText);
  const data = extractFigure(rows, figure);
  return { svg: renderChart(data, TITLES[figure]), data };
}

/** Read a spectrum CSV and write the selected figure as an SVG image. */
export function renderFile(inputCsv: string, figure: FigureKind, outputImage: string): void {
  const text = readFileSync(inputCsv, 'utf8');
  const { svg } = renderSpectrum(text, figure);
  writeFileSync(outputImage, svg);
}
