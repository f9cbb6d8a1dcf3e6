import { createHash } from 'node:crypto';
import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { parseSpectrumCsv } from '../src/csv.js';
import { extractFigure, FIGURE_KINDS } from '../src/series.js';
import { renderSpectrum } from '../src/render.js';

const FIXTURE = join(__dirname, 'fixtures', 'default_sweep.csv');
const fixtureText = () => readFileSync(FIXTURE, 'utf8');

describe('extractFigure', () => {
  const rows = parseSpectrumCsv(fixtureText());

  it('selects four curves for eps_mu', () => {
    const data = extractFigure(rows, 'eps_mu');
    expect(data.series.map((s) => s.label)).toEqual(['Re ε_r', 'Im ε_r', 'Re μ_r', 'Im μ_r']);
    expect(data.zeroLine).toBe(true);
    expect(data.logY).toBe(false);
    expect(data.series[0].points).toHaveLength(rows.length);
  });

  it('selects the complex index for index', () => {
    const data = extractFigure(rows, 'index');
    expect(data.series.map((s) => s.label)).toEqual(['Re n', 'Im n']);
    expect(data.zeroLine).toBe(true);
  });

  it('uses a log axis and annotates omitted sentinels for fom', () => {
    const data = extractFigure(rows, 'fom');
    expect(data.logY).toBe(true);
    expect(data.zeroLine).toBe(false);
    // the default sweep contains one lossless sentinel point
    expect(data.notes.join(' ')).toMatch(/lossless point/);
    const gaps = data.series[0].points.filter((p) => p.y === null).length;
    expect(gaps).toBeGreaterThan(0);
  });

  it('turns flagged cells into gaps', () => {
    const synthetic = parseSpectrumCsv(
      [
        'dp_over_gamma,re_eps,im_eps,re_mu,im_mu,re_n,im_n,fom,flags',
        '0.0,-1.0,0.0,-1.0,0.0,-1.0,0.0,5.0,',
        '0.5,,,,,,,,singular',
        '1.0,-1.0,0.0,-1.0,0.0,-1.0,0.0,5.0,',
      ].join('\n'),
    );
    const data = extractFigure(synthetic, 'eps_mu');
    expect(data.series[0].points[1].y).toBeNull();
  });

  it('is deterministic: same csv gives identical series', () => {
    const a = extractFigure(parseSpectrumCsv(fixtureText()), 'eps_mu');
    const b = extractFigure(parseSpectrumCsv(fixtureText()), 'eps_mu');
    expect(a).toEqual(b);
  });
});

describe('renderSpectrum', () => {
  it('produces a nonempty SVG for every figure kind', () => {
    for (const kind of FIGURE_KINDS) {
      const { svg } = renderSpectrum(fixtureText(), kind);
      expect(svg.length).toBeGreaterThan(1000);
      expect(svg).toContain('<svg');
      expect(svg).toContain('Δp/γ');
      expect(svg).toContain('<path');
    }
  });

  it('draws a zero line on real-part panels', () => {
    const { svg } = renderSpectrum(fixtureText(), 'eps_mu');
    expect(svg).toContain('stroke-dasharray');
  });

  it('breaks curves at gaps', () => {
    const text = [
      'dp_over_gamma,re_eps,im_eps,re_mu,im_mu,re_n,im_n,fom,flags',
      '0.0,-1.0,0.0,-1.0,0.0,-1.0,0.0,5.0,',
      '0.5,,,,,,,,singular',
      '1.0,-2.0,0.0,-2.0,0.0,-2.0,0.0,5.0,',
    ].join('\n');
    const { svg } = renderSpectrum(text, 'index');
    const re_n_path = svg.match(/<path d="([^"]+)"/);
    expect(re_n_path).not.toBeNull();
    const moves = re_n_path![1].match(/M/g) ?? [];
    expect(moves.length).toBe(2);
  });

  it('does not modify the input file', () => {
    const digest = () => createHash('sha256').update(readFileSync(FIXTURE)).digest('hex');
    const before = digest();
    renderSpectrum(fixtureText(), 'fom');
    expect(digest()).toBe(before);
  });
});
