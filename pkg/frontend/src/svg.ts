/**
 * Minimal deterministic SVG figure builder.
 *
 * Rendering is a pure function of the data handed in: no timestamps, no
 * random ids, pixel coordinates rounded the same way every run, so
 * re-rendering identical CSVs yields byte-identical images.  Series carry
 * a `data-name` attribute and guide lines a `data-role="guide"` attribute
 * so tests can read the plotted geometry back out of the file.
 */

import {Scale, Tick} from './scale';

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];
const GUIDE_COLOR = '#555555';
const AXIS_COLOR = '#222222';
const GRID_COLOR = '#dddddd';

function px(value: number): string {
  // Round away "-0.00" so equal inputs print identically on every path.
  const fixed = value.toFixed(2);
  return fixed === '-0.00' ? '0.00' : fixed;
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export interface LegendEntry {
  name: string;
  color: string;
  dash?: boolean;
}

export class Figure {
  readonly width: number;
  readonly height: number;
  /** Plot box in pixel coordinates. */
  readonly left = 84;
  readonly top = 56;
  readonly right: number;
  readonly bottom: number;
  private parts: string[] = [];
  private legendEntries: LegendEntry[] = [];

  constructor(title: string, subtitle = '', width = 720, height = 480) {
    this.width = width;
    this.height = height;
    this.right = width - 150;
    this.bottom = height - 56;
    this.parts.push(
      `<text x="${px(this.left)}" y="26" font-size="16" font-weight="bold" fill="${AXIS_COLOR}">${escapeXml(title)}</text>`,
    );
    if (subtitle) {
      this.parts.push(
        `<text x="${px(this.left)}" y="44" font-size="12" fill="#666666">${escapeXml(subtitle)}</text>`,
      );
    }
  }

  xPixel(scale: Scale, value: number): number {
    return this.left + scale.pos(value) * (this.right - this.left);
  }

  yPixel(scale: Scale, value: number): number {
    return this.bottom - scale.pos(value) * (this.bottom - this.top);
  }

  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string): void {
    const clip = (ticks: Tick[], scale: Scale) =>
      ticks.filter((t) => scale.pos(t.value) >= -1e-9 && scale.pos(t.value) <= 1 + 1e-9);
    for (const tick of clip(xScale.ticks(), xScale)) {
      const x = px(this.xPixel(xScale, tick.value));
      this.parts.push(
        `<line x1="${x}" y1="${px(this.top)}" x2="${x}" y2="${px(this.bottom)}" stroke="${GRID_COLOR}"/>`,
        `<text x="${x}" y="${px(this.bottom + 18)}" font-size="11" text-anchor="middle" fill="${AXIS_COLOR}">${escapeXml(tick.label)}</text>`,
      );
    }
    for (const tick of clip(yScale.ticks(), yScale)) {
      const y = px(this.yPixel(yScale, tick.value));
      this.parts.push(
        `<line x1="${px(this.left)}" y1="${y}" x2="${px(this.right)}" y2="${y}" stroke="${GRID_COLOR}"/>`,
        `<text x="${px(this.left - 8)}" y="${y}" dy="4" font-size="11" text-anchor="end" fill="${AXIS_COLOR}">${escapeXml(tick.label)}</text>`,
      );
    }
    this.parts.push(
      `<rect x="${px(this.left)}" y="${px(this.top)}" width="${px(this.right - this.left)}" height="${px(this.bottom - this.top)}" fill="none" stroke="${AXIS_COLOR}"/>`,
      `<text x="${px((this.left + this.right) / 2)}" y="${px(this.height - 14)}" font-size="13" text-anchor="middle" fill="${AXIS_COLOR}">${escapeXml(xLabel)}</text>`,
      `<text x="20" y="${px((this.top + this.bottom) / 2)}" font-size="13" text-anchor="middle" fill="${AXIS_COLOR}" transform="rotate(-90 20 ${px((this.top + this.bottom) / 2)})">${escapeXml(yLabel)}</text>`,
    );
  }

  series(
    name: string,
    xs: number[],
    ys: number[],
    xScale: Scale,
    yScale: Scale,
    index: number,
    dash = false,
  ): void {
    const color = PALETTE[index % PALETTE.length];
    const points = xs
      .map((x, i) => `${px(this.xPixel(xScale, x))},${px(this.yPixel(yScale, ys[i]))}`)
      .join(' ');
    const dashAttr = dash ? ' stroke-dasharray="6 4"' : '';
    this.parts.push(
      `<polyline data-name="${escapeXml(name)}" points="${points}" fill="none" stroke="${color}" stroke-width="1.6"${dashAttr}/>`,
    );
    this.legendEntries.push({name, color, dash});
  }

  markers(name: string, xs: number[], ys: number[], xScale: Scale, yScale: Scale, index: number): void {
    const color = PALETTE[index % PALETTE.length];
    for (let i = 0; i < xs.length; i++) {
      this.parts.push(
        `<circle data-name="${escapeXml(name)}" cx="${px(this.xPixel(xScale, xs[i]))}" cy="${px(this.yPixel(yScale, ys[i]))}" r="3.5" fill="${color}"/>`,
      );
    }
    this.legendEntries.push({name, color});
  }

  /** Horizontal guide with its value readable back from the markup. */
  hGuide(value: number, yScale: Scale, label: string): void {
    const y = px(this.yPixel(yScale, value));
    this.parts.push(
      `<line data-role="guide" data-value="${value}" x1="${px(this.left)}" y1="${y}" x2="${px(this.right)}" y2="${y}" stroke="${GUIDE_COLOR}" stroke-dasharray="4 4"/>`,
      `<text x="${px(this.right + 6)}" y="${y}" dy="4" font-size="11" fill="${GUIDE_COLOR}">${escapeXml(label)}</text>`,
    );
  }

  /** Straight guide segment between two data points, labelled at its left end. */
  segmentGuide(
    xA: number,
    yA: number,
    xB: number,
    yB: number,
    xScale: Scale,
    yScale: Scale,
    label: string,
  ): void {
    const x1 = px(this.xPixel(xScale, xA));
    const y1 = px(this.yPixel(yScale, yA));
    const x2 = px(this.xPixel(xScale, xB));
    const y2 = px(this.yPixel(yScale, yB));
    this.parts.push(
      `<line data-role="guide" x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" stroke="${GUIDE_COLOR}" stroke-dasharray="4 4"/>`,
      `<text x="${x1}" y="${y1}" dx="4" dy="-5" font-size="11" fill="${GUIDE_COLOR}">${escapeXml(label)}</text>`,
    );
  }

  legend(): void {
    let y = this.top + 10;
    for (const entry of this.legendEntries) {
      const x = this.right + 10;
      const dashAttr = entry.dash ? ' stroke-dasharray="6 4"' : '';
      this.parts.push(
        `<line x1="${px(x)}" y1="${px(y)}" x2="${px(x + 22)}" y2="${px(y)}" stroke="${entry.color}" stroke-width="2"${dashAttr}/>`,
        `<text x="${px(x + 28)}" y="${px(y)}" dy="4" font-size="11" fill="${AXIS_COLOR}">${escapeXml(entry.name)}</text>`,
      );
      y += 18;
    }
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  toString(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${this.width}" height="${this.height}" fill="#ffffff"/>`,
      ...this.parts,
      '</svg>',
    ].join('\n');
  }
}

/** Render rows of text as a figure, for reports that are not curves. */
export function tableFigure(title: string, columns: string[], rows: string[][]): string {
  const CHAR = 7.6;
  const CELL_PAD = 18;
  const clip = (text: string) => (text.length > 24 ? text.slice(0, 21) + '...' : text);
  const cells = rows.map((row) => row.map(clip));
  const header = columns.map(clip);
  const widths = header.map((name, j) =>
    Math.max(name.length, ...cells.map((row) => (row[j] ?? '').length)),
  );
  const xs: number[] = [];
  let cursor = 24;
  for (const w of widths) {
    xs.push(cursor);
    cursor += w * CHAR + CELL_PAD;
  }
  const width = Math.max(480, Math.ceil(cursor));
  const rowHeight = 22;
  const height = 84 + rowHeight * (cells.length + 1);
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Menlo, Consolas, monospace">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="24" y="30" font-size="15" font-weight="bold" font-family="Helvetica, Arial, sans-serif" fill="${AXIS_COLOR}">${escapeXml(title)}</text>`,
  ];
  let y = 66;
  header.forEach((name, j) => {
    parts.push(
      `<text x="${xs[j]}" y="${y}" font-size="12" font-weight="bold" fill="${AXIS_COLOR}">${escapeXml(name)}</text>`,
    );
  });
  parts.push(
    `<line x1="24" y1="${y + 8}" x2="${width - 24}" y2="${y + 8}" stroke="${AXIS_COLOR}"/>`,
  );
  for (const row of cells) {
    y += rowHeight;
    row.forEach((cell, j) => {
      parts.push(
        `<text data-role="cell" x="${xs[j]}" y="${y}" font-size="12" fill="#333333">${escapeXml(cell)}</text>`,
      );
    });
  }
  parts.push('</svg>');
  return parts.join('\n');
}
