/** Shared test helpers: fixture paths and reading geometry back from SVGs. */

import {join} from 'path';

export const FIXTURES = join(process.cwd(), 'tests', 'fixtures');

export function fixture(name: string): string {
  return join(FIXTURES, name);
}

export interface Point {
  x: number;
  y: number;
}

/** Pixel points of the series polyline with the given data-name. */
export function seriesPoints(svg: string, name: string): Point[] {
  const literal = name.replace(/[.*+?^${}()|[\]\\]/g, '\\$&');
  const match = svg.match(new RegExp(`data-name="${literal}" points="([^"]*)"`));
  if (!match) {
    throw new Error(`no series "${name}" in SVG`);
  }
  return match[1].split(' ').map((pair) => {
    const [x, y] = pair.split(',').map(Number);
    return {x, y};
  });
}

export interface HorizontalGuide {
  value: number;
  pixelY: number;
}

/** Horizontal guide lines (value + pixel row), as drawn by Figure.hGuide. */
export function horizontalGuides(svg: string): HorizontalGuide[] {
  const guides: HorizontalGuide[] = [];
  const pattern = /data-role="guide" data-value="([^"]*)"[^>]*y1="([0-9.]+)"/g;
  for (const match of svg.matchAll(pattern)) {
    guides.push({value: Number(match[1]), pixelY: Number(match[2])});
  }
  return guides;
}
