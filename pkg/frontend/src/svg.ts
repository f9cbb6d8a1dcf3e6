/** Minimal dependency-free SVG line charts. */

import { FigureData, Point } from './series.js';

const WIDTH = 840;
const HEIGHT = 560;
const MARGIN = { top: 64, right: 32, bottom: 56, left: 76 };
const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];

interface Scale {
  (v: number): number;
  ticks: number[];
}

function linearScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const f = ((v: number) => rLo + ((v - lo) / (hi - lo)) * (rHi - rLo)) as Scale;
  const n = 6;
  f.ticks = Array.from({ length: n + 1 }, (_, i) => lo + ((hi - lo) * i) / n);
  return f;
}

function logScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const base = linearScale(llo, lhi, rLo, rHi);
  const f = ((v: number) => base(Math.log10(v))) as Scale;
  const ticks: number[] = [];
  for (let k = Math.ceil(llo); k <= Math.floor(lhi); k++) ticks.push(10 ** k);
  f.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  return f;
}

function fmt(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace('+', '');
  return String(parseFloat(v.toPrecision(4)));
}

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

function pathFor(points: Point[], sx: Scale, sy: Scale): string {
  let d = '';
  let pen = false;
  for (const p of points) {
    if (p.y === null || !Number.isFinite(p.y)) {
      pen = false; // gap
      continue;
    }
    const cmd = pen ? 'L' : 'M';
    d += `${cmd}${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`;
    pen = true;
  }
  return d;
}

export function renderChart(data: FigureData, title: string): string {
  const drawable = data.series
    .flatMap((s) => s.points)
    .filter((p): p is { x: number; y: number } => p.y !== null && Number.isFinite(p.y));
  const xs = data.series.flatMap((s) => s.points.map((p) => p.x));
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);

  const plotL = MARGIN.left;
  const plotR = WIDTH - MARGIN.right;
  const plotT = MARGIN.top;
  const plotB = HEIGHT - MARGIN.bottom;
  const sx = linearScale(xLo, xHi, plotL, plotR);

  let sy: Scale;
  if (drawable.length === 0) {
    sy = linearScale(0, 1, plotB, plotT);
  } else if (data.logY) {
    const ys = drawable.map((p) => p.y);
    sy = logScale(Math.min(...ys), Math.max(...ys), plotB, plotT);
  } else {
    const ys = drawable.map((p) => p.y);
    let lo = Math.min(...ys);
    let hi = Math.max(...ys);
    const pad = 0.05 * (hi - lo || 1);
    lo -= pad;
    hi += pad;
    if (data.zeroLine) {
      lo = Math.min(lo, 0);
      hi = Math.max(hi, 0);
    }
    sy = linearScale(lo, hi, plotB, plotT);
  }

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(`<text x="${WIDTH / 2}" y="26" text-anchor="middle" font-size="18">${esc(title)}</text>`);
  data.notes.forEach((note, i) => {
    parts.push(
      `<text x="${WIDTH / 2}" y="${44 + 14 * i}" text-anchor="middle" font-size="11" fill="#555">${esc(note)}</text>`,
    );
  });

  parts.push(`<rect x="${plotL}" y="${plotT}" width="${plotR - plotL}" height="${plotB - plotT}" fill="none" stroke="#333"/>`);

  for (const tx of sx.ticks) {
    const px = sx(tx);
    parts.push(`<line x1="${px}" y1="${plotB}" x2="${px}" y2="${plotB + 5}" stroke="#333"/>`);
    parts.push(`<text x="${px}" y="${plotB + 20}" text-anchor="middle" font-size="12">${fmt(tx)}</text>`);
  }
  for (const ty of sy.ticks) {
    const py = sy(ty);
    parts.push(`<line x1="${plotL - 5}" y1="${py}" x2="${plotL}" y2="${py}" stroke="#333"/>`);
    parts.push(`<text x="${plotL - 9}" y="${py + 4}" text-anchor="end" font-size="12">${fmt(ty)}</text>`);
    parts.push(`<line x1="${plotL}" y1="${py}" x2="${plotR}" y2="${py}" stroke="#eee"/>`);
  }

  if (data.zeroLine && !data.logY && drawable.length > 0) {
    const zy = sy(0);
    parts.push(`<line x1="${plotL}" y1="${zy.toFixed(2)}" x2="${plotR}" y2="${zy.toFixed(2)}" stroke="#888" stroke-dasharray="5,4"/>`);
  }

  data.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const d = pathFor(s.points, sx, sy);
    if (d !== '') {
      parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="1.6"/>`);
    }
    const ly = plotT + 18 + 18 * i;
    parts.push(`<line x1="${plotR - 150}" y1="${ly - 4}" x2="${plotR - 120}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${plotR - 112}" y="${ly}" font-size="13">${esc(s.label)}</text>`);
  });

  parts.push(
    `<text x="${(plotL + plotR) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="14">Δp/γ</text>`,
  );
  parts.push(
    `<text x="20" y="${(plotT + plotB) / 2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 ${(plotT + plotB) / 2})">${esc(data.yLabel)}</text>`,
  );
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}
